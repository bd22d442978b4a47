//! Independent verification machinery: exact grid sampling over the simplex
//! (an upper-bound oracle for the true minimum), a determinant-based
//! characteristic polynomial oracle, and a numeric spot check of the
//! rewriting identity at a specialized t for k = 1.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::arith::{Integer, Rational, SPoly};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::quotient::{MultMatrix, ReductionTable, DEFAULT_DIM_CAP};

/// Rational lattice over the simplex: all points (m_1/N, ..., m_k/N) with
/// m_i >= 0 and sum m_i <= N.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub k: usize,
    pub resolution_denominator: u64,
}

impl GridSpec {
    pub fn new(k: usize, resolution_denominator: u64) -> Self {
        assert!(resolution_denominator >= 1);
        GridSpec { k, resolution_denominator }
    }
}

/// Exact minimum of P over the lattice simplex, with one argmin (the
/// lexicographically first). The value upper-bounds the true minimum.
pub fn grid_min(poly: &MultiPoly, grid: &GridSpec) -> Result<(Rational, Vec<Rational>)> {
    if grid.k != poly.nvars() {
        return Err(Error::DimensionMismatch { expected: poly.nvars(), got: grid.k });
    }
    let n = grid.resolution_denominator;
    let denom = Integer::from(n);
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut point = vec![0u64; grid.k];
    let mut coords: Vec<Rational> = Vec::with_capacity(grid.k);
    loop {
        coords.clear();
        coords.extend(
            point
                .iter()
                .map(|&m| Rational::new(Integer::from(m), denom.clone())),
        );
        let value = poly.eval_rational(&coords)?;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, coords.clone()));
        }
        // Advance to the next lattice point with sum <= N, lexicographically.
        let mut pos = grid.k;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            point[pos] += 1;
            if point.iter().sum::<u64>() <= n {
                break;
            }
            point[pos] = 0;
            if pos == 0 {
                break;
            }
        }
        if point.iter().all(|&m| m == 0) {
            break;
        }
    }
    Ok(best.expect("grid has at least the origin"))
}

// --- determinant oracle ----------------------------------------------------

/// Polynomial in Y with coefficients in Z[s], ascending powers of Y.
type YPoly = Vec<SPoly>;

fn ypoly_trim(p: &mut YPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn ypoly_add(a: &YPoly, b: &YPoly) -> YPoly {
    let mut out = vec![SPoly::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    ypoly_trim(&mut out);
    out
}

fn ypoly_mul(a: &YPoly, b: &YPoly) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![SPoly::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    ypoly_trim(&mut out);
    out
}

fn ypoly_neg(a: &YPoly) -> YPoly {
    a.iter().map(|c| -c).collect()
}

/// Characteristic polynomial of M by Laplace expansion of det(Y I - M) over
/// Z[s][Y], memoized over column subsets. Output matches the layout of
/// `CharPolyData`: index h holds the coefficient of Y^(dim - h).
pub fn direct_charpoly(m: &MultMatrix) -> Result<Vec<SPoly>> {
    const CAP: usize = 9;
    let dim = m.dim();
    if dim > CAP {
        return Err(Error::DimensionTooLarge { dim, cap: CAP });
    }
    // Entries of Y I - M as linear polynomials in Y.
    let mut entries: Vec<Vec<YPoly>> = Vec::with_capacity(dim);
    for r in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for c in 0..dim {
            let mut cell: YPoly = vec![-m.get(r, c)];
            if r == c {
                cell.push(SPoly::one());
            }
            ypoly_trim(&mut cell);
            row.push(cell);
        }
        entries.push(row);
    }

    let full_mask: u32 = if dim == 0 { 0 } else { (1u32 << dim) - 1 };
    let mut memo: HashMap<u32, YPoly> = HashMap::new();
    memo.insert(0, vec![SPoly::one()]);

    fn det(mask: u32, dim: usize, entries: &[Vec<YPoly>], memo: &mut HashMap<u32, YPoly>) -> YPoly {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let row = dim - mask.count_ones() as usize;
        let mut acc: YPoly = Vec::new();
        let mut sign_positive = true;
        for col in 0..dim {
            let bit = 1u32 << col;
            if mask & bit == 0 {
                continue;
            }
            let cell = &entries[row][col];
            if !cell.is_empty() {
                let minor = det(mask ^ bit, dim, entries, memo);
                let term = ypoly_mul(cell, &minor);
                acc = if sign_positive { ypoly_add(&acc, &term) } else { ypoly_add(&acc, &ypoly_neg(&term)) };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    let charpoly = det(full_mask, dim, &entries, &mut memo);
    let mut out = Vec::with_capacity(dim + 1);
    for h in 0..=dim {
        let y_power = dim - h;
        out.push(charpoly.get(y_power).cloned().unwrap_or_else(SPoly::zero));
    }
    Ok(out)
}

// --- numeric membership check ----------------------------------------------
//
// Fixed-point arithmetic: an Integer v stands for v / 2^bits. Complex
// numbers are pairs. This is enough for Durand-Kerner iteration at a
// configurable precision without external multiprecision float libraries.

#[derive(Clone, Debug)]
struct Cx {
    re: Integer,
    im: Integer,
}

struct FxCtx {
    bits: u32,
}

impl FxCtx {
    fn to_fx(&self, r: &Rational) -> Integer {
        (r.numer() << self.bits) / r.denom()
    }

    fn real(&self, r: &Rational) -> Cx {
        Cx { re: self.to_fx(r), im: Integer::zero() }
    }

    fn mul_scalar(&self, a: &Integer, b: &Integer) -> Integer {
        (a * b) >> self.bits
    }

    fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: self.mul_scalar(&a.re, &b.re) - self.mul_scalar(&a.im, &b.im),
            im: self.mul_scalar(&a.re, &b.im) + self.mul_scalar(&a.im, &b.re),
        }
    }

    fn sub(a: &Cx, b: &Cx) -> Cx {
        Cx { re: &a.re - &b.re, im: &a.im - &b.im }
    }

    /// |a|^2 in fixed-point units.
    fn norm2(&self, a: &Cx) -> Integer {
        self.mul_scalar(&a.re, &a.re) + self.mul_scalar(&a.im, &a.im)
    }

    fn div(&self, a: &Cx, b: &Cx) -> Option<Cx> {
        let den = self.norm2(b);
        if den.is_zero() {
            return None;
        }
        let num_re = self.mul_scalar(&a.re, &b.re) + self.mul_scalar(&a.im, &b.im);
        let num_im = self.mul_scalar(&a.im, &b.re) - self.mul_scalar(&a.re, &b.im);
        Some(Cx {
            re: (num_re << self.bits) / &den,
            im: (num_im << self.bits) / &den,
        })
    }

    fn horner(&self, coeffs: &[Cx], z: &Cx) -> Cx {
        let mut acc = Cx { re: Integer::zero(), im: Integer::zero() };
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, z);
            acc.re += &c.re;
            acc.im += &c.im;
        }
        acc
    }

    fn powi(&self, z: &Cx, e: u32) -> Cx {
        let mut acc = Cx { re: Integer::one() << self.bits, im: Integer::zero() };
        for _ in 0..e {
            acc = self.mul(&acc, z);
        }
        acc
    }
}

/// All complex roots of a univariate polynomial with rational coefficients
/// (ascending), by Durand-Kerner iteration in fixed-point arithmetic.
fn durand_kerner(coeffs: &[Rational], ctx: &FxCtx, target_bits: u32) -> Result<Vec<Cx>> {
    let degree = coeffs.len() - 1;
    let lead = &coeffs[degree];
    assert!(!lead.is_zero());
    let monic: Vec<Rational> = coeffs.iter().map(|c| c / lead).collect();
    let fx_coeffs: Vec<Cx> = monic.iter().map(|c| ctx.real(c)).collect();

    // Roots lie within 1 + max |c_i| of the origin for monic polynomials.
    let mut radius = Rational::one();
    for c in &monic[..degree] {
        let a = c.abs();
        if a > radius {
            radius = a;
        }
    }
    radius += Rational::one();

    // Deterministic starting points on a spiral: radius * (2/5 + 9i/10)^j.
    let seed = Cx {
        re: ctx.to_fx(&Rational::new(Integer::from(2), Integer::from(5))),
        im: ctx.to_fx(&Rational::new(Integer::from(9), Integer::from(10))),
    };
    let radius_fx = ctx.real(&radius);
    let mut roots: Vec<Cx> = (0..degree)
        .map(|j| ctx.mul(&radius_fx, &ctx.powi(&seed, j as u32 + 1)))
        .collect();

    let threshold = Integer::one() << (ctx.bits - 2 * target_bits);
    let max_sweeps = 512 + 64 * target_bits as usize / 3;
    for _ in 0..max_sweeps {
        let mut max_step = Integer::zero();
        for j in 0..degree {
            let value = ctx.horner(&fx_coeffs, &roots[j]);
            let mut prod = Cx { re: Integer::one() << ctx.bits, im: Integer::zero() };
            for (m, other) in roots.iter().enumerate() {
                if m != j {
                    prod = ctx.mul(&prod, &FxCtx::sub(&roots[j], other));
                }
            }
            let step = match ctx.div(&value, &prod) {
                Some(w) => w,
                None => {
                    // Collision of approximations: nudge and retry next sweep.
                    roots[j].re += Integer::one() << (ctx.bits / 2);
                    continue;
                }
            };
            let norm = ctx.norm2(&step);
            if norm > max_step {
                max_step = norm;
            }
            roots[j] = FxCtx::sub(&roots[j], &step);
        }
        if max_step <= threshold {
            return Ok(roots);
        }
    }
    Err(Error::RootFindingFailure(format!(
        "Durand-Kerner did not reach 2^-{target_bits} in {max_sweeps} sweeps"
    )))
}

#[derive(Clone, Debug)]
pub struct MembershipCheck {
    /// Upper bound on max over roots of |X^beta - sum_gamma c(1/t0) X^gamma|.
    pub max_residual: Rational,
    pub requested_digits: u32,
    /// floor(-log10 residual), saturated when the residual is exactly zero.
    pub achieved_digits: u32,
    /// requested_digits - achieved_digits when positive, else 0.
    pub precision_loss: u32,
    pub roots_found: usize,
}

/// Numerically validates the rewriting identity for k = 1: at every root of
/// F_1(t0, X) = dP/dX + t0 X^d, the monomial X^beta must equal its reduced
/// form sum_gamma c_(beta,gamma)(1/t0) X^gamma. The residual is diagnostic;
/// certification never depends on it.
pub fn numeric_membership_check(
    poly: &MultiPoly,
    beta: &[u32],
    t0: &Rational,
    digits: u32,
) -> Result<MembershipCheck> {
    if poly.nvars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: poly.nvars() });
    }
    if beta.len() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: beta.len() });
    }
    assert!(!t0.is_zero(), "t0 must be nonzero");
    let d = poly.total_degree();
    assert!(d >= 1, "need a nonconstant polynomial");

    // F_1(t0, X) as a rational coefficient vector, ascending in X.
    let deriv = poly.partial_derivative(0)?;
    let mut coeffs = vec![Rational::zero(); d + 1];
    for (e, c) in deriv.terms() {
        coeffs[e[0] as usize] = Rational::from_integer(c.clone());
    }
    coeffs[d] += t0;

    let target_bits = (digits * 10) / 3 + 32;
    let ctx = FxCtx { bits: 2 * target_bits + 64 };
    let roots = durand_kerner(&coeffs, &ctx, target_bits)?;

    // Reduction coordinates specialized at s = 1/t0.
    let mut table = ReductionTable::new(poly, d, DEFAULT_DIM_CAP)?;
    let reduced = table.reduce_monomial(beta);
    let s0 = t0.recip();
    let specialized: Vec<Rational> = reduced.iter().map(|c| c.eval(&s0)).collect();

    let mut worst = Integer::zero();
    for z in &roots {
        let lhs = ctx.powi(z, beta[0]);
        let mut rhs = Cx { re: Integer::zero(), im: Integer::zero() };
        for (gamma, value) in specialized.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            let term = ctx.mul(&ctx.real(value), &ctx.powi(z, gamma as u32));
            rhs.re += term.re;
            rhs.im += term.im;
        }
        let diff = FxCtx::sub(&lhs, &rhs);
        let norm = ctx.norm2(&diff);
        if norm > worst {
            worst = norm;
        }
    }

    // |residual| = sqrt(worst / 2^bits) <= ceil(sqrt(worst * 2^bits)) / 2^bits.
    let scaled = &worst << ctx.bits;
    let mut root = scaled.sqrt();
    if &root * &root < scaled {
        root += 1;
    }
    let max_residual = Rational::new(root, Integer::one() << ctx.bits);

    let achieved_digits = if max_residual.is_zero() {
        u32::MAX
    } else {
        let num_bits = max_residual.numer().magnitude().bits();
        let den_bits = max_residual.denom().magnitude().bits();
        (den_bits.saturating_sub(num_bits) as u32).saturating_mul(301) / 1000
    };
    Ok(MembershipCheck {
        max_residual,
        requested_digits: digits,
        achieved_digits,
        precision_loss: digits.saturating_sub(achieved_digits),
        roots_found: roots.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::interior_pipeline;
    use crate::multipoly::parse_poly;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(int(n), int(d))
    }

    fn sp(coeffs: &[i64]) -> SPoly {
        SPoly::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    #[test]
    fn grid_min_examples() {
        let p = parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap();
        let (value, argmin) = grid_min(&p, &GridSpec::new(1, 2)).unwrap();
        assert_eq!(value, rat(1, 2));
        assert_eq!(argmin, vec![rat(1, 2)]);

        let q = parse_poly("X1 + X2 + 1", None).unwrap();
        let (value, argmin) = grid_min(&q, &GridSpec::new(2, 1)).unwrap();
        assert_eq!(value, rat(1, 1));
        assert_eq!(argmin, vec![rat(0, 1), rat(0, 1)]);

        let c = parse_poly("7", Some(2)).unwrap();
        let (value, _) = grid_min(&c, &GridSpec::new(2, 5)).unwrap();
        assert_eq!(value, rat(7, 1));

        assert!(grid_min(&p, &GridSpec::new(3, 2)).is_err());
    }

    #[test]
    fn grid_refinement_is_monotone() {
        let p = parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap();
        let (v1, _) = grid_min(&p, &GridSpec::new(1, 7)).unwrap();
        let (v2, _) = grid_min(&p, &GridSpec::new(1, 14)).unwrap();
        assert!(v2 <= v1);
    }

    #[test]
    fn direct_charpoly_worked_instance() {
        let p = parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap();
        let data = interior_pipeline(&p, DEFAULT_DIM_CAP).unwrap();
        let coeffs = direct_charpoly(&data.matrix).unwrap();
        // Y^2 - (4+8s) Y + (4+8s)
        assert_eq!(coeffs[0], SPoly::one());
        assert_eq!(coeffs[1], sp(&[-4, -8]));
        assert_eq!(coeffs[2], sp(&[4, 8]));
    }

    #[test]
    fn direct_charpoly_identity_and_zero() {
        let id = MultMatrix::identity(2);
        let coeffs = direct_charpoly(&id).unwrap();
        assert_eq!(coeffs[0], SPoly::one());
        assert_eq!(coeffs[1], sp(&[-2]));
        assert_eq!(coeffs[2], SPoly::one());

        let zero = MultMatrix::from_entries(3, vec![SPoly::zero(); 9]);
        let coeffs = direct_charpoly(&zero).unwrap();
        assert_eq!(coeffs[0], SPoly::one());
        assert!(coeffs[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn direct_charpoly_guards_dimension() {
        let big = MultMatrix::identity(10);
        assert!(matches!(
            direct_charpoly(&big),
            Err(Error::DimensionTooLarge { dim: 10, cap: 9 })
        ));
    }

    #[test]
    fn membership_residual_small_on_worked_instance() {
        let p = parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap();
        let check = numeric_membership_check(&p, &[2], &rat(1, 10), 30).unwrap();
        let tol = Rational::new(int(1), Integer::from(10).pow(20));
        assert!(check.max_residual < tol, "residual {}", check.max_residual);
        assert_eq!(check.roots_found, 2);
    }

    #[test]
    fn membership_exact_for_basis_monomial() {
        let p = parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap();
        let check = numeric_membership_check(&p, &[1], &rat(1, 10), 30).unwrap();
        assert!(check.max_residual.is_zero());
        assert_eq!(check.precision_loss, 0);
    }

    #[test]
    fn membership_second_instance() {
        let p = parse_poly("X1^2 + 1", None).unwrap();
        let check = numeric_membership_check(&p, &[3], &rat(1, 7), 30).unwrap();
        let tol = Rational::new(int(1), Integer::from(10).pow(20));
        assert!(check.max_residual < tol, "residual {}", check.max_residual);
    }
}
