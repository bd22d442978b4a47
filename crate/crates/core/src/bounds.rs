//! Certified lower bounds: the closed-form expressions in (k, d, tau), the
//! face recursion over the simplex that produces the instance-specific
//! global bound, and the doubly exponential example family.

use num_traits::{One, Zero};

use crate::arith::{Integer, Rational};
use crate::charpoly::interior_pipeline;
use crate::error::{Error, Result};
use crate::multipoly::{ceil_log2_pow, hyperplane_tau_bound, MultiPoly, ProblemInstance};
use crate::quotient::DEFAULT_DIM_CAP;

/// Exact binomial coefficient C(n, r).
pub fn binomial(n: usize, r: usize) -> Integer {
    if r > n {
        return Integer::zero();
    }
    let r = r.min(n - r);
    let mut acc = Integer::one();
    for i in 0..r {
        acc = acc * Integer::from(n - i) / Integer::from(i + 1);
    }
    acc
}

/// Parameters of the closed-form bounds. All three must be >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedFormParams {
    pub k: usize,
    pub d: usize,
    pub tau: u32,
}

impl ClosedFormParams {
    pub fn new(k: usize, d: usize, tau: u32) -> Self {
        assert!(k >= 1 && d >= 1 && tau >= 1, "closed forms need k, d, tau >= 1");
        ClosedFormParams { k, d, tau }
    }
}

fn pow_big(base: Integer, exp: &Integer) -> Integer {
    let exp_u32: u32 = exp.try_into().expect("exponent fits u32");
    base.pow(exp_u32)
}

/// 2^(-(tau+1) d^(k+1)) * d^(-(k+1) d^k) * C(d+k, k+1)^(-d^k (d-1)).
pub fn closed_form_full(p: &ClosedFormParams) -> Rational {
    let dk = Integer::from(p.d).pow(p.k as u32);
    let dk1 = &dk * Integer::from(p.d);
    let two_exp = Integer::from(p.tau + 1) * &dk1;
    let d_exp = Integer::from(p.k + 1) * &dk;
    let c_exp = &dk * Integer::from(p.d - 1);
    let denom = pow_big(Integer::from(2), &two_exp)
        * pow_big(Integer::from(p.d), &d_exp)
        * pow_big(binomial(p.d + p.k, p.k + 1), &c_exp);
    Rational::new(Integer::one(), denom)
}

/// 2^(-(tau+1) d^(k+1)) * d^(-(k+1) d^(k+1)), using C(d+k, k+1) <= d^(k+1).
pub fn closed_form_simplified(p: &ClosedFormParams) -> Rational {
    let dk1 = Integer::from(p.d).pow(p.k as u32 + 1);
    let two_exp = Integer::from(p.tau + 1) * &dk1;
    let d_exp = Integer::from(p.k + 1) * &dk1;
    let denom = pow_big(Integer::from(2), &two_exp) * pow_big(Integer::from(p.d), &d_exp);
    Rational::new(Integer::one(), denom)
}

/// The interior-case bound; the same expression as `closed_form_full`, kept
/// separate because its contract covers only minima attained at interior
/// points.
pub fn closed_form_interior(p: &ClosedFormParams) -> Rational {
    closed_form_full(p)
}

/// Where in the face tree a contribution came from: which original
/// variables were pinned to zero, and at which dimensions the hyperplane
/// substitution was applied (record of eliminated variable labels, in
/// order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub zeroed: Vec<usize>,
    pub hyperplane_applied: Vec<usize>,
    pub dimension: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContributionKind {
    Interior,
    VertexConstant,
}

#[derive(Clone, Debug)]
pub struct Contribution {
    pub face: FaceDescriptor,
    pub kind: ContributionKind,
    /// `None` for interior nodes where the construction yields no
    /// constraint (h1 = 0); those are excluded from the minimum.
    pub value: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub global_bound: Rational,
    pub contributions: Vec<Contribution>,
    /// Closed forms at the root parameters; absent for degenerate inputs
    /// (constant polynomial or zero variables).
    pub closed_form_full: Option<Rational>,
    pub closed_form_simplified: Option<Rational>,
    pub instance: ProblemInstance,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub max_dim: u64,
    pub face_recursion: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { max_dim: DEFAULT_DIM_CAP, face_recursion: true }
    }
}

struct FaceWalker {
    options: CertifyOptions,
    contributions: Vec<Contribution>,
    diagnostics: Vec<String>,
}

impl FaceWalker {
    /// Depth-first walk: the node's own contribution first, then the
    /// zero-restriction children by ascending variable index, then the
    /// hyperplane branch.
    fn visit(
        &mut self,
        poly: &MultiPoly,
        labels: &[usize],
        zeroed: &[usize],
        hyperplane: &[usize],
    ) -> Result<()> {
        let face = FaceDescriptor {
            zeroed: zeroed.to_vec(),
            hyperplane_applied: hyperplane.to_vec(),
            dimension: labels.len(),
        };

        if let Some(value) = poly.constant_value() {
            if value <= Integer::zero() {
                return Err(Error::PositivityViolated(format!(
                    "face {{zeroed: {:?}, hyperplane: {:?}}} has constant value {value}",
                    face.zeroed, face.hyperplane_applied
                )));
            }
            self.contributions.push(Contribution {
                face,
                kind: ContributionKind::VertexConstant,
                value: Some(Rational::from_integer(value)),
            });
            return Ok(());
        }

        let degree = poly.total_degree();
        if degree >= 2 {
            // The pipeline itself checks that the bound dominates the
            // interior closed form at this node's (k', d', tau').
            let data = interior_pipeline(poly, self.options.max_dim)?;
            self.contributions.push(Contribution {
                face: face.clone(),
                kind: ContributionKind::Interior,
                value: data.bound.clone(),
            });
        }
        // Linear faces contribute nothing from the interior: the minimum is
        // attained at a vertex, which a deeper node reports exactly.

        if !self.options.face_recursion {
            return Ok(());
        }

        for pos in 0..labels.len() {
            let child = poly.restrict_zero(pos)?;
            let mut child_labels = labels.to_vec();
            let label = child_labels.remove(pos);
            let mut child_zeroed = zeroed.to_vec();
            child_zeroed.push(label);
            child_zeroed.sort_unstable();
            self.visit(&child, &child_labels, &child_zeroed, hyperplane)?;
        }

        let child = poly.substitute_simplex_hyperplane();
        if !child.is_zero() && !poly.is_zero() {
            let tau = poly.bitsize()?;
            let budget = hyperplane_tau_bound(tau, degree, labels.len());
            let got = child.bitsize()?;
            if got > budget {
                self.diagnostics.push(format!(
                    "hyperplane substitution bitsize {got} exceeds budget {budget} at face {:?}",
                    zeroed
                ));
            }
        }
        let mut child_labels = labels.to_vec();
        let label = child_labels.pop().expect("nonconstant polynomial has a variable");
        let mut child_hyper = hyperplane.to_vec();
        child_hyper.push(label);
        self.visit(&child, &child_labels, zeroed, &child_hyper)
    }
}

/// Certified rational lower bound for min over the simplex of a polynomial
/// the caller asserts to be positive there. Explores the full face tree:
/// constants report their value exactly, faces of degree >= 2 contribute
/// the interior pipeline bound, and the minimum over all contributions is
/// sound because the face whose relative interior holds the true minimizer
/// contributes a valid lower bound for it.
pub fn certified_lower_bound(poly: &MultiPoly, options: &CertifyOptions) -> Result<BoundReport> {
    let instance = match ProblemInstance::new(poly.clone()) {
        Ok(inst) => inst,
        Err(Error::ZeroPolynomial) => {
            return Err(Error::PositivityViolated("the zero polynomial is not positive".into()))
        }
        Err(e) => return Err(e),
    };

    let mut walker = FaceWalker {
        options: *options,
        contributions: Vec::new(),
        diagnostics: Vec::new(),
    };
    let labels: Vec<usize> = (1..=poly.nvars()).collect();
    walker.visit(poly, &labels, &[], &[])?;

    let global_bound = walker
        .contributions
        .iter()
        .filter_map(|c| c.value.clone())
        .min()
        .ok_or_else(|| {
            Error::InvariantViolation("no usable contribution in the face tree".into())
        })?;
    if global_bound <= Rational::zero() {
        return Err(Error::InvariantViolation("non-positive global bound".into()));
    }

    let (cf_full, cf_simpl) = if instance.k >= 1 && instance.d >= 1 {
        let params = ClosedFormParams::new(instance.k, instance.d, instance.tau.max(1));
        (Some(closed_form_full(&params)), Some(closed_form_simplified(&params)))
    } else {
        (None, None)
    };

    Ok(BoundReport {
        global_bound,
        contributions: walker.contributions,
        closed_form_full: cf_full,
        closed_form_simplified: cf_simpl,
        instance,
        diagnostics: walker.diagnostics,
    })
}

/// The family (2^(tau/2) X1 - 1)^2 + (X2 - X1^(d/2))^2 + ... + X_k^d,
/// whose minimum over the simplex is at most 2^(-tau (d/2)^k): the bound's
/// doubly exponential shape is unavoidable.
pub fn example_family(k: usize, d: usize, tau: u32) -> Result<MultiPoly> {
    if !d.is_multiple_of(2) || d < 4 || !tau.is_multiple_of(2) {
        return Err(Error::ParityViolation { d, tau: tau as usize });
    }
    assert!(k >= 1);
    let half_d = (d / 2) as u32;
    // (2^(tau/2) X1 - 1)^2
    let mut first = MultiPoly::zero(k);
    first.add_term(
        {
            let mut e = vec![0u32; k];
            e[0] = 1;
            e
        },
        Integer::one() << (tau / 2),
    );
    first.add_term(vec![0u32; k], -Integer::one());
    let mut acc = first.pow(2);
    // (X_{i+1} - X_i^(d/2))^2 for i = 1..k-1
    for i in 0..k - 1 {
        let xi_pow = MultiPoly::variable(k, i)?.pow(half_d);
        let diff = MultiPoly::variable(k, i + 1)?.sub(&xi_pow);
        acc = acc.add(&diff.pow(2));
    }
    // X_k^d
    acc = acc.add(&MultiPoly::variable(k, k - 1)?.pow(d as u32));
    Ok(acc)
}

/// The paper-style upper bound 2^(-tau (d/2)^k) for the minimum of the
/// example family, witnessed by X_i = 2^(-(tau/2)(d/2)^(i-1)).
pub fn family_minimum_upper_bound(k: usize, d: usize, tau: u32) -> Rational {
    let exp = Integer::from(tau) * Integer::from(d / 2).pow(k as u32);
    let exp_u32: u32 = (&exp).try_into().expect("exponent fits u32");
    Rational::new(Integer::one(), Integer::one() << exp_u32)
}

/// The witness point X_i = 2^(-(tau/2)(d/2)^(i-1)).
pub fn family_witness_point(k: usize, d: usize, tau: u32) -> Vec<Rational> {
    (0..k)
        .map(|i| {
            let exp = Integer::from(tau / 2) * Integer::from(d / 2).pow(i as u32);
            let exp_u32: u32 = (&exp).try_into().expect("exponent fits u32");
            Rational::new(Integer::one(), Integer::one() << exp_u32)
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct InductionReport {
    pub checked: usize,
    pub violations: Vec<(usize, usize, u32)>,
}

/// Exact spot check of the recursion-closing inequality
/// 2^(d^k (tau+2+d log k)) d^(k d^(k-1)) C(d+k-1, k)^(d^(k-1)(d-1))
///   <= 2^(d^(k+1) (tau+1)) d^((k+1) d^k) C(d+k, k+1)^(d^k (d-1)),
/// with the log term ceiled.
pub fn theorem_induction_check(
    d_range: impl IntoIterator<Item = usize> + Clone,
    k_range: impl IntoIterator<Item = usize> + Clone,
    tau_range: impl IntoIterator<Item = u32> + Clone,
) -> InductionReport {
    let mut report = InductionReport::default();
    for d in d_range {
        assert!(d >= 2, "the inequality needs d >= 2");
        for k in k_range.clone() {
            for tau in tau_range.clone() {
                let dk = Integer::from(d).pow(k as u32 - 1) * Integer::from(d);
                let dk_minus = Integer::from(d).pow(k as u32 - 1);
                let dk1 = &dk * Integer::from(d);

                let lhs_two_exp = &dk * Integer::from(tau as usize + 2 + ceil_log2_pow(k, d) as usize);
                let lhs = pow_big(Integer::from(2), &lhs_two_exp)
                    * pow_big(Integer::from(d), &(Integer::from(k) * &dk_minus))
                    * pow_big(
                        binomial(d + k - 1, k),
                        &(&dk_minus * Integer::from(d - 1)),
                    );
                let rhs = pow_big(Integer::from(2), &(&dk1 * Integer::from(tau as usize + 1)))
                    * pow_big(Integer::from(d), &(Integer::from(k + 1) * &dk))
                    * pow_big(binomial(d + k, k + 1), &(&dk * Integer::from(d - 1)));
                report.checked += 1;
                if lhs > rhs {
                    report.violations.push((d, k, tau));
                }
            }
        }
    }
    report
}
