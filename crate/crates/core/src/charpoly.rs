//! Traces of powers of the multiplication matrix, the Newton-identity
//! characteristic polynomial over Z[s], the specialized integer polynomial
//! S(0,Y), and the reciprocal root bound that turns it into a lower bound on
//! interior critical values.

use num_traits::{One, Signed, Zero};

use crate::arith::{Integer, Rational, SPoly};
use crate::error::{Error, Result};
use crate::multipoly::{MultiPoly, ProblemInstance};
use crate::quotient::{mult_matrix, MultMatrix, ReductionTable};

/// tr(M^n) for n = 1..=dim, entries in Z[s].
#[derive(Clone, Debug)]
pub struct TraceSequence {
    traces: Vec<SPoly>,
}

impl TraceSequence {
    /// tr(M^n), 1-based n.
    pub fn get(&self, n: usize) -> &SPoly {
        &self.traces[n - 1]
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SPoly> {
        self.traces.iter()
    }
}

/// Traces of M^1, ..., M^n_max by iterated exact matrix products, with the
/// proven degree and size bounds checked on every coefficient. A violation
/// signals an upstream bug, never bad input.
pub fn power_traces(m: &MultMatrix, n_max: usize, inst: &ProblemInstance) -> Result<TraceSequence> {
    let mut traces = Vec::with_capacity(n_max);
    let mut power = m.clone();
    for n in 1..=n_max {
        if n > 1 {
            power = power.mul(m);
        }
        let tr = power.trace();
        check_trace_bounds(&tr, n, inst)?;
        traces.push(tr);
    }
    Ok(TraceSequence { traces })
}

fn check_trace_bounds(tr: &SPoly, n: usize, inst: &ProblemInstance) -> Result<()> {
    let (k, d, tau) = (inst.k, inst.d, inst.tau);
    if let Some(deg) = tr.degree() {
        if deg > n * (d - 1) {
            return Err(Error::TraceBoundViolation(format!(
                "deg tr(M^{n}) = {deg} exceeds n(d-1) = {}",
                n * (d - 1)
            )));
        }
    }
    let binom = crate::bounds::binomial(d + k, k + 1);
    for (l, c) in tr.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let bound = (Integer::one() << ((l + n) as u32 * tau))
            * Integer::from(d).pow(k as u32 + 1)
            * binom.pow((l + n - 1) as u32);
        if c.abs() > bound {
            return Err(Error::TraceBoundViolation(format!(
                "|tr(M^{n})_{l}| exceeds 2^((l+n)tau) d^(k+1) C(d+k,k+1)^(l+n-1)"
            )));
        }
    }
    Ok(())
}

/// Coefficients of the characteristic polynomial of m_R, indexed so that
/// `b[h]` holds the coefficient of Y^(dim - h); `b[0] = 1`. `l0` is the
/// largest s-degree over the b's, `h1` the largest h whose coefficient at
/// s^l0 is nonzero, and `s0` collects b[h] at s^l0 for h = 0..=dim, i.e. the
/// coefficients of the specialized polynomial S(0,Y).
#[derive(Clone, Debug)]
pub struct CharPolyData {
    pub dim: usize,
    pub b: Vec<SPoly>,
    pub l0: usize,
    pub h1: usize,
    pub s0: Vec<Integer>,
}

/// Newton's identities: b[h] = -(1/h) sum_{n=1..h} tr(M^n) b[h-n]. Every
/// division must be exact because the characteristic polynomial of a matrix
/// over Z[s] has coefficients in Z[s].
pub fn newton_charpoly(
    traces: &TraceSequence,
    dim: usize,
    inst: &ProblemInstance,
) -> Result<CharPolyData> {
    assert!(traces.len() >= dim, "need traces up to the dimension");
    let mut b: Vec<SPoly> = Vec::with_capacity(dim + 1);
    b.push(SPoly::one());
    for h in 1..=dim {
        let mut acc = SPoly::zero();
        for n in 1..=h {
            acc = &acc + &(traces.get(n) * &b[h - n]);
        }
        let divisor = Integer::from(h as u64);
        let mut coeffs = Vec::with_capacity(acc.coeffs().len());
        for (l, c) in acc.coeffs().iter().enumerate() {
            let (q, r) = num_integer::div_rem(c.clone(), divisor.clone());
            if !r.is_zero() {
                return Err(Error::NonIntegralCoefficient { h, l });
            }
            coeffs.push(-q);
        }
        let bh = SPoly::from_coeffs(coeffs);
        check_charpoly_bounds(&bh, h, inst)?;
        b.push(bh);
    }

    let l0 = b.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let s0: Vec<Integer> = b.iter().map(|p| p.coeff(l0)).collect();
    let h1 = s0
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or(Error::AllTopCoefficientsZero)?;

    // When l0 exceeds (dim-1)(d-1), the degree bounds force every b[h] with
    // h <= dim-1 to vanish at s^l0, so only the determinant coefficient can
    // survive there.
    if dim >= 1 && l0 > (dim - 1) * (inst.d - 1) {
        for (h, c) in s0.iter().enumerate().take(dim) {
            if !c.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "b[{h}] nonzero at s^{l0} although l0 > (dim-1)(d-1)"
                )));
            }
        }
        if h1 != dim {
            return Err(Error::InvariantViolation(
                "l0 > (dim-1)(d-1) must force h1 = dim".into(),
            ));
        }
    }

    Ok(CharPolyData { dim, b, l0, h1, s0 })
}

fn check_charpoly_bounds(bh: &SPoly, h: usize, inst: &ProblemInstance) -> Result<()> {
    let (k, d, tau) = (inst.k, inst.d, inst.tau);
    if let Some(deg) = bh.degree() {
        if deg > h * (d - 1) {
            return Err(Error::InvariantViolation(format!(
                "deg b[{h}] = {deg} exceeds h(d-1) = {}",
                h * (d - 1)
            )));
        }
    }
    let binom = crate::bounds::binomial(d + k, k + 1);
    for (l, c) in bh.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let bound = (Integer::one() << ((l + h) as u32 * (tau + 1)))
            * Integer::from(d).pow(((k + 1) * h) as u32)
            * binom.pow(l as u32);
        // Strict for h >= 1.
        if c.abs() >= bound {
            return Err(Error::InvariantViolation(format!(
                "|b[{h}]_{l}| reaches 2^((l+h)(tau+1)) d^((k+1)h) C(d+k,k+1)^l"
            )));
        }
    }
    Ok(())
}

impl CharPolyData {
    /// Coefficients of S(0,Y) ascending in Y: index j holds the coefficient
    /// of Y^j, which is b[dim - j] at s^l0.
    pub fn s0_y_coeffs(&self) -> Vec<Integer> {
        let mut out: Vec<Integer> = self.s0.iter().rev().cloned().collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }
}

/// The integer polynomial S(0,Y) = sum_h b[h] at s^l0 times Y^(dim-h),
/// as the h-indexed coefficient list of `CharPolyData`.
pub fn extract_s0(c: &CharPolyData) -> Vec<Integer> {
    c.s0.clone()
}

/// Reciprocal root bound for S(0,Y): every nonzero root y satisfies
/// 1/|y| <= max_{h < h1} |s0[h] / s0[h1]| + 1. Returns `None` when h1 = 0,
/// i.e. S(0,Y) has no nonzero root and no interior critical value shows up
/// through this construction.
pub fn cauchy_reciprocal_bound(c: &CharPolyData) -> Option<Rational> {
    if c.h1 == 0 {
        return None;
    }
    let pivot = c.s0[c.h1].abs();
    debug_assert!(!pivot.is_zero());
    let max_num = c.s0[..c.h1]
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Integer::zero);
    Some(Rational::new(max_num, pivot) + Rational::one())
}

/// Everything the interior pipeline produces for one face polynomial.
#[derive(Clone, Debug)]
pub struct InteriorData {
    pub instance: ProblemInstance,
    pub dim: usize,
    pub r_poly: MultiPoly,
    pub matrix: MultMatrix,
    pub traces: TraceSequence,
    pub charpoly: CharPolyData,
    pub cauchy: Option<Rational>,
    /// 1/(d * B): a lower bound for the minimum whenever the minimum is
    /// attained only at interior points of the simplex.
    pub bound: Option<Rational>,
}

/// Runs build_R -> reduction table -> M_R -> traces -> Newton -> S(0,Y) ->
/// reciprocal root bound. Requires total degree >= 2.
pub fn interior_pipeline(poly: &MultiPoly, max_dim: u64) -> Result<InteriorData> {
    let instance = ProblemInstance::new(poly.clone())?;
    assert!(instance.d >= 2, "interior pipeline needs total degree >= 2");
    let r_poly = poly.build_r(instance.d)?;
    let mut table = ReductionTable::new(poly, instance.d, max_dim)?;
    let dim = table.dim();
    let matrix = mult_matrix(&mut table, &r_poly)?;
    let traces = power_traces(&matrix, dim, &instance)?;
    let charpoly = newton_charpoly(&traces, dim, &instance)?;
    let cauchy = cauchy_reciprocal_bound(&charpoly);
    let bound = cauchy.clone().map(|b| {
        Rational::one() / (Rational::from_integer(Integer::from(instance.d)) * b)
    });
    if let Some(value) = &bound {
        // 1/(d B) dominates the interior closed form at the instance
        // parameters; this follows from the strict coefficient bounds and
        // |s0[h1]| >= 1, so failing it means an implementation bug.
        let params = crate::bounds::ClosedFormParams::new(instance.k, instance.d, instance.tau);
        let floor = crate::bounds::closed_form_interior(&params);
        if *value < floor {
            return Err(Error::InvariantViolation(format!(
                "interior bound {value} falls below the closed form at (k={}, d={}, tau={})",
                instance.k, instance.d, instance.tau
            )));
        }
    }
    Ok(InteriorData { instance, dim, r_poly, matrix, traces, charpoly, cauchy, bound })
}

/// Lower bound for the minimum when it is attained only at interior points;
/// `None` when the construction yields no constraint.
pub fn interior_bound(poly: &MultiPoly, max_dim: u64) -> Result<Option<Rational>> {
    Ok(interior_pipeline(poly, max_dim)?.bound)
}
