//! The two group algebras: functions under pointwise product and group-law
//! coproduct, measures under convolution and diagonal coproduct, with the
//! integration pairing between them.
//!
//! Operations act on dense coefficient vectors over a [`FiniteGroup`] basis.
//! Coproduct outputs live on the direct-product group, indexed row-major as
//! `x * order + y`. The axiom checker applies every defining identity to every
//! basis tuple and reports the worst deviation, so a passing report is an
//! exhaustive machine check, not a spot check.

use crate::group::{FiniteGroup, GroupError, BRUTE_FORCE_CAP};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("operands live on different groups")]
    GroupMismatch,
    #[error("value vector has length {len}, group order is {order}")]
    LengthMismatch { len: usize, order: usize },
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_len(len: usize, order: usize) -> Result<(), AlgebraError> {
    if len == order {
        Ok(())
    } else {
        Err(AlgebraError::LengthMismatch { len, order })
    }
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<(), AlgebraError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(AlgebraError::GroupMismatch)
    }
}

/// A complex-valued function on a finite group, one value per element.
#[derive(Debug, Clone, PartialEq)]
pub struct FnVec {
    group: Arc<FiniteGroup>,
    values: Vec<Complex64>,
}

/// A complex measure on a finite group, one weight per element.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasVec {
    group: Arc<FiniteGroup>,
    weights: Vec<Complex64>,
}

impl FnVec {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Complex64>) -> Result<Self, AlgebraError> {
        check_len(values.len(), group.order())?;
        Ok(FnVec { group, values })
    }

    /// The constant function with value `lambda` (the unit is `lambda = 1`).
    pub fn constant(group: Arc<FiniteGroup>, lambda: Complex64) -> Self {
        let order = group.order();
        FnVec {
            group,
            values: vec![lambda; order],
        }
    }

    /// Indicator function of a subset of elements.
    pub fn indicator(group: Arc<FiniteGroup>, subset: &[usize]) -> Self {
        let mut values = vec![ZERO; group.order()];
        for &x in subset {
            values[x] = ONE;
        }
        FnVec { group, values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise product, the algebra product applied to `self ⊗ other`.
    pub fn mul(&self, other: &FnVec) -> Result<FnVec, AlgebraError> {
        same_group(&self.group, &other.group)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(FnVec {
            group: self.group.clone(),
            values,
        })
    }

    /// Pointwise complex conjugate.
    pub fn involution(&self) -> FnVec {
        FnVec {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Evaluation at the group identity.
    pub fn counit(&self) -> Complex64 {
        self.values[self.group.identity()]
    }

    /// `a ↦ a[xy]` on the direct-product group, row-major pairs.
    pub fn coproduct(&self) -> FnVec {
        let g = &self.group;
        let n = g.order();
        let product_group = FiniteGroup::direct_product(g, g);
        let mut values = vec![ZERO; n * n];
        for x in 0..n {
            for y in 0..n {
                values[x * n + y] = self.values[g.mul(x, y)];
            }
        }
        FnVec {
            group: product_group,
            values,
        }
    }

    /// `a ↦ conj(a[x⁻¹])`.
    pub fn coinvolution(&self) -> FnVec {
        let g = &self.group;
        let values = (0..g.order())
            .map(|x| self.values[g.inverse(x)].conj())
            .collect();
        FnVec {
            group: self.group.clone(),
            values,
        }
    }

    /// `a ↦ a[x⁻¹]`.
    pub fn antipode(&self) -> FnVec {
        let g = &self.group;
        let values = (0..g.order()).map(|x| self.values[g.inverse(x)]).collect();
        FnVec {
            group: self.group.clone(),
            values,
        }
    }
}

impl MeasVec {
    pub fn new(group: Arc<FiniteGroup>, weights: Vec<Complex64>) -> Result<Self, AlgebraError> {
        check_len(weights.len(), group.order())?;
        Ok(MeasVec { group, weights })
    }

    /// Dirac measure at a single element.
    pub fn dirac(group: Arc<FiniteGroup>, x: usize) -> Self {
        let mut weights = vec![ZERO; group.order()];
        weights[x] = ONE;
        MeasVec { group, weights }
    }

    /// The unit `lambda·d[1]`.
    pub fn unit(group: Arc<FiniteGroup>, lambda: Complex64) -> Self {
        let e = group.identity();
        let mut weights = vec![ZERO; group.order()];
        weights[e] = lambda;
        MeasVec { group, weights }
    }

    /// Uniform probability measure.
    pub fn uniform(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        MeasVec {
            group,
            weights: vec![Complex64::new(1.0 / n as f64, 0.0); n],
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Convolution, the algebra product applied to `self ⊗ other`:
    /// `(z·w)[t] = Σ_{xy=t} z[x] w[y]`.
    pub fn convolve(&self, other: &MeasVec) -> Result<MeasVec, AlgebraError> {
        same_group(&self.group, &other.group)?;
        let g = &self.group;
        let n = g.order();
        let mut weights = vec![ZERO; n];
        for x in 0..n {
            if self.weights[x] == ZERO {
                continue;
            }
            for y in 0..n {
                weights[g.mul(x, y)] += self.weights[x] * other.weights[y];
            }
        }
        Ok(MeasVec {
            group: self.group.clone(),
            weights,
        })
    }

    /// `z ↦ conj(z[x⁻¹])`.
    pub fn involution(&self) -> MeasVec {
        let g = &self.group;
        let weights = (0..g.order())
            .map(|x| self.weights[g.inverse(x)].conj())
            .collect();
        MeasVec {
            group: self.group.clone(),
            weights,
        }
    }

    /// Total mass.
    pub fn counit(&self) -> Complex64 {
        self.weights.iter().sum()
    }

    /// Diagonal embedding on the direct-product group.
    pub fn coproduct(&self) -> MeasVec {
        let g = &self.group;
        let n = g.order();
        let product_group = FiniteGroup::direct_product(g, g);
        let mut weights = vec![ZERO; n * n];
        for x in 0..n {
            weights[x * n + x] = self.weights[x];
        }
        MeasVec {
            group: product_group,
            weights,
        }
    }

    /// `z ↦ conj(z[x])`.
    pub fn coinvolution(&self) -> MeasVec {
        MeasVec {
            group: self.group.clone(),
            weights: self.weights.iter().map(|w| w.conj()).collect(),
        }
    }

    /// `z ↦ z[x⁻¹]`.
    pub fn antipode(&self) -> MeasVec {
        let g = &self.group;
        let weights = (0..g.order()).map(|x| self.weights[g.inverse(x)]).collect();
        MeasVec {
            group: self.group.clone(),
            weights,
        }
    }
}

/// Integration pairing `⟨⟨z|a⟩⟩ = Σ_x z[x] a[x]`, bilinear in both arguments.
pub fn pair(z: &MeasVec, a: &FnVec) -> Result<Complex64, AlgebraError> {
    same_group(&z.group, &a.group)?;
    Ok(z.weights
        .iter()
        .zip(&a.values)
        .map(|(w, v)| w * v)
        .sum())
}

// ---------------------------------------------------------------------------
// Tensor kernels. A tensor of arity k over a group of order n is a dense
// vector of n^k coefficients, digit j of the row-major index addressing slot j.
// The same kernels back the public operations above and the axiom checker.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
struct Tensor {
    arity: usize,
    data: Vec<Complex64>,
}

impl Tensor {
    fn delta(n: usize, arity: usize, index: usize) -> Tensor {
        let mut data = vec![ZERO; n.pow(arity as u32)];
        data[index] = ONE;
        Tensor { arity, data }
    }

    fn scalar(value: Complex64) -> Tensor {
        Tensor {
            arity: 0,
            data: vec![value],
        }
    }

    fn max_abs_diff(&self, other: &Tensor) -> f64 {
        assert_eq!(self.arity, other.arity);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Which of the two dual algebras plays the role of the *-Hopf algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraSide {
    Functions,
    Measures,
}

impl std::fmt::Display for AlgebraSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraSide::Functions => write!(f, "functions"),
            AlgebraSide::Measures => write!(f, "measures"),
        }
    }
}

/// Slot-indexed operations of one side's *-Hopf algebra on raw tensors.
struct Ops {
    group: Arc<FiniteGroup>,
    side: AlgebraSide,
}

impl Ops {
    fn n(&self) -> usize {
        self.group.order()
    }

    /// Split a linear index around `slot`: `(prefix, digit, suffix)` with
    /// `trailing` digits after the slot.
    fn strides(&self, arity: usize, slot: usize) -> (usize, usize) {
        let n = self.n();
        let trailing = n.pow((arity - 1 - slot) as u32);
        let leading = n.pow(slot as u32);
        (leading, trailing)
    }

    /// Insert the algebra unit at `slot` (arity k -> k+1). Functions: constant
    /// extension; measures: point mass at the identity.
    fn unit_insert(&self, t: &Tensor, slot: usize) -> Tensor {
        let n = self.n();
        let arity = t.arity + 1;
        let (leading, trailing) = self.strides(arity, slot);
        let mut data = vec![ZERO; t.data.len() * n];
        let e = self.group.identity();
        for p in 0..leading {
            for i in 0..n {
                let keep = match self.side {
                    AlgebraSide::Functions => true,
                    AlgebraSide::Measures => i == e,
                };
                if !keep {
                    continue;
                }
                for q in 0..trailing {
                    data[(p * n + i) * trailing + q] = t.data[p * trailing + q];
                }
            }
        }
        Tensor { arity, data }
    }

    /// Algebra product merging slots `slot, slot+1` (arity k -> k-1).
    /// Functions: diagonal evaluation; measures: convolution.
    fn product(&self, t: &Tensor, slot: usize) -> Tensor {
        let n = self.n();
        let arity = t.arity - 1;
        let (leading, trailing) = self.strides(arity, slot);
        let mut data = vec![ZERO; t.data.len() / n];
        for p in 0..leading {
            for q in 0..trailing {
                match self.side {
                    AlgebraSide::Functions => {
                        for x in 0..n {
                            data[(p * n + x) * trailing + q] =
                                t.data[((p * n + x) * n + x) * trailing + q];
                        }
                    }
                    AlgebraSide::Measures => {
                        for x in 0..n {
                            for y in 0..n {
                                let z = self.group.mul(x, y);
                                data[(p * n + z) * trailing + q] +=
                                    t.data[((p * n + x) * n + y) * trailing + q];
                            }
                        }
                    }
                }
            }
        }
        Tensor { arity, data }
    }

    /// Counit on `slot` (arity k -> k-1). Functions: evaluate at the identity;
    /// measures: total mass of the slot.
    fn counit(&self, t: &Tensor, slot: usize) -> Tensor {
        let n = self.n();
        let arity = t.arity - 1;
        let (leading, trailing) = if arity == 0 {
            (1, 1)
        } else {
            self.strides(arity + 1, slot)
        };
        let mut data = vec![ZERO; t.data.len() / n];
        let e = self.group.identity();
        for p in 0..leading {
            for q in 0..trailing {
                data[p * trailing + q] = match self.side {
                    AlgebraSide::Functions => t.data[(p * n + e) * trailing + q],
                    AlgebraSide::Measures => {
                        (0..n).map(|i| t.data[(p * n + i) * trailing + q]).sum()
                    }
                };
            }
        }
        Tensor { arity, data }
    }

    /// Coproduct splitting `slot` into two (arity k -> k+1). Functions: pull
    /// back along the group law; measures: diagonal duplication.
    fn coproduct(&self, t: &Tensor, slot: usize) -> Tensor {
        let n = self.n();
        let arity = t.arity + 1;
        let (leading, trailing) = self.strides(t.arity, slot);
        let mut data = vec![ZERO; t.data.len() * n];
        for p in 0..leading {
            for q in 0..trailing {
                match self.side {
                    AlgebraSide::Functions => {
                        for x in 0..n {
                            for y in 0..n {
                                let z = self.group.mul(x, y);
                                data[((p * n + x) * n + y) * trailing + q] =
                                    t.data[(p * n + z) * trailing + q];
                            }
                        }
                    }
                    AlgebraSide::Measures => {
                        for x in 0..n {
                            data[((p * n + x) * n + x) * trailing + q] =
                                t.data[(p * n + x) * trailing + q];
                        }
                    }
                }
            }
        }
        Tensor { arity, data }
    }

    fn invert_slot(&self, t: &Tensor, slot: usize) -> Tensor {
        let n = self.n();
        let (leading, trailing) = self.strides(t.arity, slot);
        let mut data = vec![ZERO; t.data.len()];
        for p in 0..leading {
            for i in 0..n {
                let j = self.group.inverse(i);
                for q in 0..trailing {
                    data[(p * n + i) * trailing + q] = t.data[(p * n + j) * trailing + q];
                }
            }
        }
        Tensor {
            arity: t.arity,
            data,
        }
    }

    fn twist(&self, t: &Tensor, slot: usize) -> Tensor {
        let n = self.n();
        let (leading, trailing) = self.strides(t.arity - 1, slot);
        let mut data = vec![ZERO; t.data.len()];
        for p in 0..leading {
            for x in 0..n {
                for y in 0..n {
                    for q in 0..trailing {
                        data[((p * n + y) * n + x) * trailing + q] =
                            t.data[((p * n + x) * n + y) * trailing + q];
                    }
                }
            }
        }
        Tensor {
            arity: t.arity,
            data,
        }
    }

    fn conj(&self, t: &Tensor) -> Tensor {
        Tensor {
            arity: t.arity,
            data: t.data.iter().map(|c| c.conj()).collect(),
        }
    }

    /// One antilinear map acting as the involution on `inv_slots` and the
    /// coinvolution on `coinv_slots`: slot index actions plus a single
    /// global conjugation.
    fn star_mixed(&self, t: &Tensor, inv_slots: &[usize], coinv_slots: &[usize]) -> Tensor {
        let mut out = t.clone();
        let (inv_action, coinv_action): (&[usize], &[usize]) = match self.side {
            // function involution is pointwise, coinvolution inverts the argument
            AlgebraSide::Functions => (&[], coinv_slots),
            // measure involution inverts the subset, coinvolution is pointwise
            AlgebraSide::Measures => (inv_slots, &[]),
        };
        for &s in inv_action.iter().chain(coinv_action) {
            out = self.invert_slot(&out, s);
        }
        self.conj(&out)
    }

    fn star(&self, t: &Tensor, slots: &[usize]) -> Tensor {
        self.star_mixed(t, slots, &[])
    }

    fn costar(&self, t: &Tensor, slots: &[usize]) -> Tensor {
        self.star_mixed(t, &[], slots)
    }

    /// Antipode index action `x ↦ x⁻¹` on one slot (linear on both sides).
    fn antipode(&self, t: &Tensor, slot: usize) -> Tensor {
        self.invert_slot(t, slot)
    }
}

/// One verified identity: its name and the largest deviation found.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomEntry {
    pub axiom: String,
    pub max_deviation: f64,
}

/// Result of the exhaustive axiom check for one group and one side.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomReport {
    pub group_order: usize,
    pub side: String,
    pub tolerance: f64,
    pub entries: Vec<AxiomEntry>,
    pub commutative: bool,
    pub cocommutative: bool,
    /// Basis pair witnessing a noncommutative product, if any.
    pub noncommutativity_witness: Option<(usize, usize)>,
    /// Basis element witnessing a non-cocommutative coproduct, if any.
    pub non_cocommutativity_witness: Option<usize>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.max_deviation <= self.tolerance)
    }

    pub fn max_deviation(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.max_deviation)
            .fold(0.0, f64::max)
    }
}

const AXIOM_TOLERANCE: f64 = 1e-12;

fn basis_max<F>(n: usize, arity: usize, f: F) -> f64
where
    F: Fn(&Tensor) -> f64 + Sync,
{
    (0..n.pow(arity as u32))
        .into_par_iter()
        .map(|b| f(&Tensor::delta(n, arity, b)))
        .reduce(|| 0.0, f64::max)
}

/// Check every *-Hopf algebra identity on all basis tuples of the chosen side.
pub fn verify_hopf_axioms(
    group: &Arc<FiniteGroup>,
    side: AlgebraSide,
) -> Result<AxiomReport, GroupError> {
    let n = group.order();
    if n > BRUTE_FORCE_CAP {
        return Err(GroupError::OrderTooLarge {
            order: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let ops = Ops {
        group: group.clone(),
        side,
    };
    let mut entries = Vec::new();
    let mut push = |axiom: &str, dev: f64| {
        entries.push(AxiomEntry {
            axiom: axiom.to_string(),
            max_deviation: dev,
        })
    };

    // unital: ∇(η⊗ι) = ι = ∇(ι⊗η)
    push(
        "unital",
        basis_max(n, 1, |t| {
            let left = ops.product(&ops.unit_insert(t, 0), 0);
            let right = ops.product(&ops.unit_insert(t, 1), 0);
            left.max_abs_diff(t).max(right.max_abs_diff(t))
        }),
    );

    // associative: ∇(∇⊗ι) = ∇(ι⊗∇)
    push(
        "associative",
        basis_max(n, 3, |t| {
            let left = ops.product(&ops.product(t, 0), 0);
            let right = ops.product(&ops.product(t, 1), 0);
            left.max_abs_diff(&right)
        }),
    );

    // involutive: ∗∗ = ι and ∗∇τ = ∇(∗⊗∗)
    let inv_sq = basis_max(n, 1, |t| ops.star(&ops.star(t, &[0]), &[0]).max_abs_diff(t));
    let inv_mul = basis_max(n, 2, |t| {
        let left = ops.star(&ops.product(&ops.twist(t, 0), 0), &[0]);
        let right = ops.product(&ops.star(t, &[0, 1]), 0);
        left.max_abs_diff(&right)
    });
    push("involutive", inv_sq.max(inv_mul));

    // counital: (ε⊗ι)Δ = ι = (ι⊗ε)Δ
    push(
        "counital",
        basis_max(n, 1, |t| {
            let cp = ops.coproduct(t, 0);
            let left = ops.counit(&cp, 0);
            let right = ops.counit(&cp, 1);
            left.max_abs_diff(t).max(right.max_abs_diff(t))
        }),
    );

    // coassociative: (Δ⊗ι)Δ = (ι⊗Δ)Δ
    push(
        "coassociative",
        basis_max(n, 1, |t| {
            let cp = ops.coproduct(t, 0);
            ops.coproduct(&cp, 0).max_abs_diff(&ops.coproduct(&cp, 1))
        }),
    );

    // coinvolutive: ϖϖ = ι and τΔϖ = (ϖ⊗ϖ)Δ
    let coinv_sq = basis_max(n, 1, |t| {
        ops.costar(&ops.costar(t, &[0]), &[0]).max_abs_diff(t)
    });
    let coinv_cp = basis_max(n, 1, |t| {
        let left = ops.twist(&ops.coproduct(&ops.costar(t, &[0]), 0), 0);
        let right = ops.costar(&ops.coproduct(t, 0), &[0, 1]);
        left.max_abs_diff(&right)
    });
    push("coinvolutive", coinv_sq.max(coinv_cp));

    // diagonal commutation: εη = ι, Δ∇ = (∇⊗∇)(ι⊗τ⊗ι)(Δ⊗Δ), ϖ∗ = ∗ϖ
    let unit_counit = {
        let one = Tensor::scalar(ONE);
        ops.counit(&ops.unit_insert(&one, 0), 0).max_abs_diff(&one)
    };
    let prod_coprod = basis_max(n, 2, |t| {
        let left = ops.coproduct(&ops.product(t, 0), 0);
        let spread = ops.coproduct(&ops.coproduct(t, 0), 2);
        let twisted = ops.twist(&spread, 1);
        let right = ops.product(&ops.product(&twisted, 0), 1);
        left.max_abs_diff(&right)
    });
    let star_costar = basis_max(n, 1, |t| {
        ops.costar(&ops.star(t, &[0]), &[0])
            .max_abs_diff(&ops.star(&ops.costar(t, &[0]), &[0]))
    });
    push(
        "commutation_diagonal",
        unit_counit.max(prod_coprod).max(star_costar),
    );

    // (co)unit–(co)product commutation: Δη = η⊗η, ε∇ = ε⊗ε
    let coprod_unit = {
        let one = Tensor::scalar(ONE);
        ops.coproduct(&ops.unit_insert(&one, 0), 0)
            .max_abs_diff(&ops.unit_insert(&ops.unit_insert(&one, 0), 0))
    };
    let prod_counit = basis_max(n, 2, |t| {
        ops.counit(&ops.product(t, 0), 0)
            .max_abs_diff(&ops.counit(&ops.counit(t, 0), 0))
    });
    push("commutation_unit_product", coprod_unit.max(prod_counit));

    // (co)unit–(co)involution commutation: ϖη = η∗, ε∗ = ∗ε
    let coinv_unit = {
        let one = Tensor::scalar(Complex64::new(0.5, -1.5));
        ops.costar(&ops.unit_insert(&one, 0), &[0])
            .max_abs_diff(&ops.unit_insert(&ops.conj(&one), 0))
    };
    let inv_counit = basis_max(n, 1, |t| {
        ops.counit(&ops.star(t, &[0]), 0)
            .max_abs_diff(&ops.conj(&ops.counit(t, 0)))
    });
    push("commutation_unit_involution", coinv_unit.max(inv_counit));

    // (co)product–(co)involution commutation: ϖ∇ = ∇(ϖ⊗ϖ), Δ∗ = (∗⊗∗)Δ
    let coinv_prod = basis_max(n, 2, |t| {
        ops.costar(&ops.product(t, 0), &[0])
            .max_abs_diff(&ops.product(&ops.costar(t, &[0, 1]), 0))
    });
    let inv_coprod = basis_max(n, 1, |t| {
        ops.coproduct(&ops.star(t, &[0]), 0)
            .max_abs_diff(&ops.star(&ops.coproduct(t, 0), &[0, 1]))
    });
    push(
        "commutation_product_involution",
        coinv_prod.max(inv_coprod),
    );

    // antipode relation: ∇(ϖ⊗∗)Δ = η∗ε = ∇(∗⊗ϖ)Δ
    push(
        "antipode_relation",
        basis_max(n, 1, |t| {
            let cp = ops.coproduct(t, 0);
            let left = ops.product(&ops.star_mixed(&cp, &[1], &[0]), 0);
            let mid = ops.unit_insert(&ops.conj(&ops.counit(t, 0)), 0);
            let right = ops.product(&ops.star_mixed(&cp, &[0], &[1]), 0);
            left.max_abs_diff(&mid).max(right.max_abs_diff(&mid))
        }),
    );

    // antipode factorisation: s = ϖ∗ = ∗ϖ, and ∇(s⊗ι)Δ = ηε = ∇(ι⊗s)Δ
    let s_factor = basis_max(n, 1, |t| {
        let s = ops.antipode(t, 0);
        let a = ops.costar(&ops.star(t, &[0]), &[0]);
        let b = ops.star(&ops.costar(t, &[0]), &[0]);
        s.max_abs_diff(&a).max(s.max_abs_diff(&b))
    });
    let s_hopf = basis_max(n, 1, |t| {
        let cp = ops.coproduct(t, 0);
        let left = ops.product(&ops.antipode(&cp, 0), 0);
        let right = ops.product(&ops.antipode(&cp, 1), 0);
        let mid = ops.unit_insert(&ops.counit(t, 0), 0);
        left.max_abs_diff(&mid).max(right.max_abs_diff(&mid))
    });
    push("antipode_factorization", s_factor.max(s_hopf));

    // commutativity of the product and cocommutativity of the coproduct are
    // not axioms; record them with witnesses.
    let mut noncommutativity_witness = None;
    'outer: for x in 0..n {
        for y in 0..n {
            let t = Tensor::delta(n, 2, x * n + y);
            let d = ops
                .product(&t, 0)
                .max_abs_diff(&ops.product(&ops.twist(&t, 0), 0));
            if d > AXIOM_TOLERANCE {
                noncommutativity_witness = Some((x, y));
                break 'outer;
            }
        }
    }
    let mut non_cocommutativity_witness = None;
    for x in 0..n {
        let t = Tensor::delta(n, 1, x);
        let cp = ops.coproduct(&t, 0);
        if cp.max_abs_diff(&ops.twist(&cp, 0)) > AXIOM_TOLERANCE {
            non_cocommutativity_witness = Some(x);
            break;
        }
    }

    Ok(AxiomReport {
        group_order: n,
        side: side.to_string(),
        tolerance: AXIOM_TOLERANCE,
        entries,
        commutative: noncommutativity_witness.is_none(),
        cocommutative: non_cocommutativity_witness.is_none(),
        noncommutativity_witness,
        non_cocommutativity_witness,
    })
}

/// Result of the pairing-duality check between the two sides.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DualityReport {
    pub group_order: usize,
    pub tolerance: f64,
    pub entries: Vec<AxiomEntry>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.max_deviation <= self.tolerance)
    }
}

fn pair_tensors(f: &Tensor, m: &Tensor) -> Complex64 {
    assert_eq!(f.arity, m.arity);
    f.data.iter().zip(&m.data).map(|(a, b)| a * b).sum()
}

/// Check the duality relations between measure and function operations on all
/// basis tuples: unit–counit, product–coproduct, involution–coinvolution
/// (antidual) and antipode–antipode.
pub fn verify_duality(group: &Arc<FiniteGroup>) -> Result<DualityReport, GroupError> {
    let n = group.order();
    if n > BRUTE_FORCE_CAP {
        return Err(GroupError::OrderTooLarge {
            order: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let fops = Ops {
        group: group.clone(),
        side: AlgebraSide::Functions,
    };
    let mops = Ops {
        group: group.clone(),
        side: AlgebraSide::Measures,
    };
    let mut entries = Vec::new();

    // ⟨z|ηλ⟩ = λ(z∘ε) and ⟨λη|a⟩ = λ(ε∘a)
    let mut unit_counit: f64 = 0.0;
    for zb in 0..n {
        let z = Tensor::delta(n, 1, zb);
        let lhs = pair_tensors(&fops.unit_insert(&Tensor::scalar(ONE), 0), &z);
        let rhs = mops.counit(&z, 0).data[0];
        unit_counit = unit_counit.max((lhs - rhs).norm());
    }
    for ab in 0..n {
        let a = Tensor::delta(n, 1, ab);
        let lhs = pair_tensors(&a, &mops.unit_insert(&Tensor::scalar(ONE), 0));
        let rhs = fops.counit(&a, 0).data[0];
        unit_counit = unit_counit.max((lhs - rhs).norm());
    }
    entries.push(AxiomEntry {
        axiom: "duality_unit_counit".into(),
        max_deviation: unit_counit,
    });

    // ⟨y∇|a⟩ = ⟨y|Δa⟩ over y ∈ U⊗U basis, a ∈ V basis
    let prod_cp = (0..n * n)
        .into_par_iter()
        .map(|yb| {
            let y = Tensor::delta(n, 2, yb);
            let y_prod = mops.product(&y, 0);
            (0..n)
                .map(|ab| {
                    let a = Tensor::delta(n, 1, ab);
                    let lhs = pair_tensors(&a, &y_prod);
                    let rhs = pair_tensors(&fops.coproduct(&a, 0), &y);
                    (lhs - rhs).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    // ⟨z|∇b⟩ = ⟨zΔ|b⟩ over z ∈ U basis, b ∈ V⊗V basis
    let cp_prod = (0..n)
        .into_par_iter()
        .map(|zb| {
            let z = Tensor::delta(n, 1, zb);
            let z_cp = mops.coproduct(&z, 0);
            (0..n * n)
                .map(|bb| {
                    let b = Tensor::delta(n, 2, bb);
                    let lhs = pair_tensors(&fops.product(&b, 0), &z);
                    let rhs = pair_tensors(&b, &z_cp);
                    (lhs - rhs).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    entries.push(AxiomEntry {
        axiom: "duality_product_coproduct".into(),
        max_deviation: prod_cp.max(cp_prod),
    });

    // ⟨z|∗a⟩ = ⟨zϖ|a⟩* and ⟨z∗|a⟩ = ⟨z|ϖa⟩*
    let mut invol: f64 = 0.0;
    for zb in 0..n {
        for ab in 0..n {
            let z = Tensor::delta(n, 1, zb);
            let a = Tensor::delta(n, 1, ab);
            let lhs1 = pair_tensors(&fops.star(&a, &[0]), &z);
            let rhs1 = pair_tensors(&a, &mops.costar(&z, &[0])).conj();
            let lhs2 = pair_tensors(&a, &mops.star(&z, &[0]));
            let rhs2 = pair_tensors(&fops.costar(&a, &[0]), &z).conj();
            invol = invol.max((lhs1 - rhs1).norm()).max((lhs2 - rhs2).norm());
        }
    }
    entries.push(AxiomEntry {
        axiom: "duality_involution_coinvolution".into(),
        max_deviation: invol,
    });

    // ⟨z|sa⟩ = ⟨zs|a⟩
    let mut antipode: f64 = 0.0;
    for zb in 0..n {
        for ab in 0..n {
            let z = Tensor::delta(n, 1, zb);
            let a = Tensor::delta(n, 1, ab);
            let lhs = pair_tensors(&fops.antipode(&a, 0), &z);
            let rhs = pair_tensors(&a, &mops.antipode(&z, 0));
            antipode = antipode.max((lhs - rhs).norm());
        }
    }
    entries.push(AxiomEntry {
        axiom: "duality_antipode".into(),
        max_deviation: antipode,
    });

    Ok(DualityReport {
        group_order: n,
        tolerance: AXIOM_TOLERANCE,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn involution_twice_is_identity() {
        let g = FiniteGroup::cyclic(3);
        let a = FnVec::new(g, vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, -3.0)]).unwrap();
        assert_eq!(a.involution().involution(), a);
    }

    #[test]
    fn z2_coproduct_values() {
        let g = FiniteGroup::cyclic(2);
        let a = FnVec::new(g.clone(), vec![c(1.0, 0.0), c(5.0, 0.0)]).unwrap();
        let cp = a.coproduct();
        // pairs (0,0),(0,1),(1,0),(1,1) -> a[0+0], a[0+1], a[1+0], a[1+1]
        assert_eq!(
            cp.values(),
            &[c(1.0, 0.0), c(5.0, 0.0), c(5.0, 0.0), c(1.0, 0.0)]
        );
    }

    #[test]
    fn antipode_of_indicator_inverts_subset_on_s3() {
        let g = FiniteGroup::symmetric(3);
        let subset: Vec<usize> = vec![1, 3];
        let d = FnVec::indicator(g.clone(), &subset);
        let s = d.antipode();
        let inverted: Vec<usize> = subset.iter().map(|&x| g.inverse(x)).collect();
        let expected = FnVec::indicator(g.clone(), &inverted);
        assert_eq!(s, expected);
    }

    #[test]
    fn dirac_convolution_follows_group_law() {
        let g = FiniteGroup::symmetric(3);
        for x in 0..6 {
            for y in 0..6 {
                let dx = MeasVec::dirac(g.clone(), x);
                let dy = MeasVec::dirac(g.clone(), y);
                let prod = dx.convolve(&dy).unwrap();
                assert_eq!(prod, MeasVec::dirac(g.clone(), g.mul(x, y)));
            }
        }
    }

    #[test]
    fn z2_self_convolution_gives_identity() {
        let g = FiniteGroup::cyclic(2);
        let dg = MeasVec::dirac(g.clone(), 1);
        assert_eq!(dg.convolve(&dg).unwrap(), MeasVec::dirac(g, 0));
    }

    #[test]
    fn measure_involution_inverts_element() {
        let g = FiniteGroup::symmetric(3);
        for x in 0..6 {
            let d = MeasVec::dirac(g.clone(), x);
            assert_eq!(d.involution(), MeasVec::dirac(g.clone(), g.inverse(x)));
        }
    }

    #[test]
    fn pairing_evaluates_and_integrates() {
        let g = FiniteGroup::symmetric(3);
        let a = FnVec::new(
            g.clone(),
            (0..6).map(|i| c(i as f64, -(i as f64))).collect(),
        )
        .unwrap();
        for x in 0..6 {
            let d = MeasVec::dirac(g.clone(), x);
            assert_eq!(pair(&d, &a).unwrap(), a.values()[x]);
        }
        let z = MeasVec::new(g.clone(), (0..6).map(|i| c(0.1 * i as f64, 0.0)).collect()).unwrap();
        let subset = [0, 2, 4];
        let ind = FnVec::indicator(g.clone(), &subset);
        let expected: Complex64 = subset.iter().map(|&x| z.weights()[x]).sum();
        assert_eq!(pair(&z, &ind).unwrap(), expected);
    }

    #[test]
    fn uniform_probability_pairs_to_one_with_unit() {
        let g = FiniteGroup::cyclic(2);
        let z = MeasVec::uniform(g.clone());
        let one = FnVec::constant(g, ONE);
        assert_eq!(pair(&z, &one).unwrap(), ONE);
    }

    #[test]
    fn group_mismatch_is_reported() {
        let g2 = FiniteGroup::cyclic(2);
        let g3 = FiniteGroup::cyclic(3);
        let a = FnVec::constant(g2, ONE);
        let z = MeasVec::uniform(g3);
        assert_eq!(pair(&z, &a).unwrap_err(), AlgebraError::GroupMismatch);
    }

    #[test]
    fn z2_measure_axioms_all_pass_exactly() {
        let g = FiniteGroup::cyclic(2);
        let report = verify_hopf_axioms(&g, AlgebraSide::Measures).unwrap();
        assert!(report.passed());
        assert_eq!(report.max_deviation(), 0.0);
        assert!(report.commutative);
        assert!(report.cocommutative);
    }

    #[test]
    fn s3_measure_axioms_pass_with_noncommutative_product() {
        let g = FiniteGroup::symmetric(3);
        let report = verify_hopf_axioms(&g, AlgebraSide::Measures).unwrap();
        assert!(report.passed());
        assert!(!report.commutative);
        let (x, y) = report.noncommutativity_witness.unwrap();
        assert_ne!(g.mul(x, y), g.mul(y, x));
        assert!(report.cocommutative);
    }

    #[test]
    fn s3_function_axioms_pass_with_noncocommutative_coproduct() {
        let g = FiniteGroup::symmetric(3);
        let report = verify_hopf_axioms(&g, AlgebraSide::Functions).unwrap();
        assert!(report.passed());
        assert!(report.commutative);
        assert!(!report.cocommutative);
        assert!(report.non_cocommutativity_witness.is_some());
    }

    #[test]
    fn duality_holds_exactly_on_s3() {
        let g = FiniteGroup::symmetric(3);
        let report = verify_duality(&g).unwrap();
        assert!(report.passed());
        for e in &report.entries {
            assert_eq!(e.max_deviation, 0.0, "{}", e.axiom);
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let g = FiniteGroup::cyclic(30);
        assert!(matches!(
            verify_hopf_axioms(&g, AlgebraSide::Functions),
            Err(GroupError::OrderTooLarge { .. })
        ));
    }
}
