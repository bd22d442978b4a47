//! The quotient algebra W = C(t)[X]/(F_1, ..., F_k) for the deformed system
//! F_i = dP/dX_i + t X_i^d.
//!
//! W has the monomial basis { X^gamma | 0 <= gamma_i <= d-1 }. Rewriting a
//! monomial X^beta into this basis uses the relation
//! X_i^d = -(1/t) dP/dX_i, giving coordinates in Z[s] with s = 1/t. The
//! rewriting coefficients are memoized per source polynomial.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_traits::Zero;

use crate::arith::{Integer, SPoly};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;

/// Default cap on the quotient dimension d^k.
pub const DEFAULT_DIM_CAP: u64 = 4096;

/// `value` written in base `base` with `k` digits, most significant first.
fn digits_base(mut value: u64, base: u64, k: usize) -> Vec<u32> {
    let mut digits = vec![0u32; k];
    for slot in digits.iter_mut().rev() {
        *slot = (value % base) as u32;
        value /= base;
    }
    digits
}

/// The monomial basis U of W: all exponent vectors in the box
/// [0, d-1]^k, ascending lexicographic.
#[derive(Clone, Debug)]
pub struct MonomialBasisU {
    k: usize,
    d: usize,
    exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasisU {
    pub fn build(k: usize, d: usize, cap: u64) -> Result<Self> {
        assert!(k >= 1 && d >= 1, "basis needs k >= 1 and d >= 1");
        let dim = (d as u64)
            .checked_pow(k as u32)
            .filter(|&n| n <= cap)
            .ok_or(Error::SizeOverflow { dim: format!("{d}^{k}"), cap })?;
        // Base-d digits, most significant first: increasing index is
        // ascending lexicographic order.
        let exponents: Vec<Vec<u32>> = (0..dim).map(|idx| digits_base(idx, d as u64, k)).collect();
        let index = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(MonomialBasisU { k, d, exponents, index })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn exponent(&self, index: usize) -> &[u32] {
        &self.exponents[index]
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn index_of(&self, gamma: &[u32]) -> Option<usize> {
        self.index.get(gamma).copied()
    }

    pub fn contains(&self, beta: &[u32]) -> bool {
        beta.iter().all(|&b| (b as usize) < self.d)
    }
}

/// Which index with beta_i >= d the rewriting step eliminates. Coordinates
/// in a basis are unique, so the choice cannot change the result; the
/// consistency check exercises both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    SmallestIndex,
    LargestIndex,
}

/// Memoized rewriting table beta -> coordinates of [X^beta] over U.
pub struct ReductionTable {
    basis: MonomialBasisU,
    d: usize,
    k: usize,
    coeffs: BTreeMap<Vec<u32>, Integer>,
    pivot: PivotRule,
    memo: BTreeMap<Vec<u32>, Vec<SPoly>>,
}

impl ReductionTable {
    pub fn new(poly: &MultiPoly, d: usize, cap: u64) -> Result<Self> {
        Self::with_pivot(poly, d, cap, PivotRule::SmallestIndex)
    }

    pub fn with_pivot(poly: &MultiPoly, d: usize, cap: u64, pivot: PivotRule) -> Result<Self> {
        assert!(d >= poly.total_degree(), "table degree below deg P");
        let k = poly.nvars();
        let basis = MonomialBasisU::build(k, d, cap)?;
        Ok(ReductionTable {
            basis,
            d,
            k,
            coeffs: poly.terms().map(|(e, c)| (e.clone(), c.clone())).collect(),
            pivot,
            memo: BTreeMap::new(),
        })
    }

    pub fn basis(&self) -> &MonomialBasisU {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Memoized entries (beta, coordinates) computed so far.
    pub fn memo_iter(&self) -> impl Iterator<Item = (&Vec<u32>, &[SPoly])> {
        self.memo.iter().map(|(b, v)| (b, v.as_slice()))
    }

    fn pick_pivot(&self, beta: &[u32]) -> usize {
        let found = match self.pivot {
            PivotRule::SmallestIndex => beta.iter().position(|&b| b as usize >= self.d),
            PivotRule::LargestIndex => beta.iter().rposition(|&b| b as usize >= self.d),
        };
        found.expect("no pivot index for a basis monomial")
    }

    /// Coordinates of [X^beta] in the basis U, as polynomials in s.
    pub fn reduce_monomial(&mut self, beta: &[u32]) -> Vec<SPoly> {
        assert_eq!(beta.len(), self.k, "exponent vector length mismatch");
        if let Some(v) = self.memo.get(beta) {
            return v.clone();
        }
        let dim = self.dim();
        let coords = if let Some(idx) = self.basis.index_of(beta) {
            let mut unit = vec![SPoly::zero(); dim];
            unit[idx] = SPoly::one();
            unit
        } else {
            let i = self.pick_pivot(beta);
            let mut btilde = beta.to_vec();
            btilde[i] -= self.d as u32;
            // X^beta = X_i^d X^btilde = sum over terms mu of P with mu_i >= 1
            // of -(mu_i a_mu) (1/t) X^(mu - e_i + btilde).
            let rewrite: Vec<(Vec<u32>, Integer)> = self
                .coeffs
                .iter()
                .filter(|(mu, _)| mu[i] >= 1)
                .map(|(mu, a)| {
                    let mut child = btilde.clone();
                    for (slot, m) in child.iter_mut().zip(mu) {
                        *slot += m;
                    }
                    child[i] -= 1;
                    (child, -(a * Integer::from(mu[i])))
                })
                .collect();
            let mut acc = vec![SPoly::zero(); dim];
            for (child, factor) in rewrite {
                let child_coords = self.reduce_monomial(&child);
                for (slot, cc) in acc.iter_mut().zip(&child_coords) {
                    if !cc.is_zero() {
                        *slot = &*slot + &cc.scale(&factor).mul_s_pow(1);
                    }
                }
            }
            acc
        };
        self.memo.insert(beta.to_vec(), coords.clone());
        coords
    }

    /// Coordinates of [g] for a polynomial g in the same variables.
    pub fn reduce_poly(&mut self, g: &MultiPoly) -> Result<Vec<SPoly>> {
        if g.nvars() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: g.nvars() });
        }
        let mut acc = vec![SPoly::zero(); self.dim()];
        let terms: Vec<(Vec<u32>, Integer)> =
            g.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        for (expt, c) in terms {
            let coords = self.reduce_monomial(&expt);
            for (slot, cc) in acc.iter_mut().zip(&coords) {
                if !cc.is_zero() {
                    *slot = &*slot + &cc.scale(&c);
                }
            }
        }
        Ok(acc)
    }
}

/// Square matrix over Z[s], row-major. Column c holds the coordinates of
/// the reduced product g * X^(gamma_c).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultMatrix {
    dim: usize,
    entries: Vec<SPoly>,
}

impl MultMatrix {
    pub fn from_entries(dim: usize, entries: Vec<SPoly>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        MultMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![SPoly::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = SPoly::one();
        }
        MultMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &SPoly {
        &self.entries[row * self.dim + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, rhs: &MultMatrix) -> MultMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut entries = vec![SPoly::zero(); n * n];
        for r in 0..n {
            for j in 0..n {
                let a = self.get(r, j);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(j, c);
                    if b.is_zero() {
                        continue;
                    }
                    entries[r * n + c] = &entries[r * n + c] + &(a * b);
                }
            }
        }
        MultMatrix { dim: n, entries }
    }

    pub fn trace(&self) -> SPoly {
        let mut acc = SPoly::zero();
        for i in 0..self.dim {
            acc = &acc + self.get(i, i);
        }
        acc
    }
}

/// The matrix of the multiplication map m_g on W in the basis U.
pub fn mult_matrix(table: &mut ReductionTable, g: &MultiPoly) -> Result<MultMatrix> {
    if g.nvars() != table.k {
        return Err(Error::DimensionMismatch { expected: table.k, got: g.nvars() });
    }
    let dim = table.dim();
    let mut entries = vec![SPoly::zero(); dim * dim];
    for col in 0..dim {
        let gamma = table.basis().exponent(col).to_vec();
        let terms: Vec<(Vec<u32>, Integer)> =
            g.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        for (alpha, c) in terms {
            let beta: Vec<u32> = gamma.iter().zip(&alpha).map(|(a, b)| a + b).collect();
            let coords = table.reduce_monomial(&beta);
            for (row, cc) in coords.iter().enumerate() {
                if !cc.is_zero() {
                    entries[row * dim + col] = &entries[row * dim + col] + &cc.scale(&c);
                }
            }
        }
    }
    Ok(MultMatrix { dim, entries })
}

#[derive(Clone, Debug, Default)]
pub struct ConsistencyReport {
    pub commuting_pairs: usize,
    pub relations_checked: usize,
    pub pivot_reductions_compared: usize,
}

/// Structural validation of the quotient construction:
/// (a) the multiplication matrices of X_1, ..., X_k pairwise commute;
/// (b) [dP/dX_i] + t [X_i^d] = 0 for every i (the defining relations);
/// (c) rewriting is pivot-independent (smallest vs. largest index).
pub fn verify_quotient_consistency(
    poly: &MultiPoly,
    d: usize,
    cap: u64,
) -> Result<ConsistencyReport> {
    let k = poly.nvars();
    let mut table = ReductionTable::new(poly, d, cap)?;
    let mut report = ConsistencyReport::default();

    let mut var_matrices = Vec::with_capacity(k);
    for i in 0..k {
        let xi = MultiPoly::variable(k, i)?;
        var_matrices.push(mult_matrix(&mut table, &xi)?);
    }
    for i in 0..k {
        for j in i + 1..k {
            let ij = var_matrices[i].mul(&var_matrices[j]);
            let ji = var_matrices[j].mul(&var_matrices[i]);
            if ij != ji {
                return Err(Error::ConsistencyFailure(format!(
                    "multiplication matrices of X{} and X{} do not commute",
                    i + 1,
                    j + 1
                )));
            }
            report.commuting_pairs += 1;
        }
    }

    for i in 0..k {
        let deriv = poly.partial_derivative(i)?;
        let deriv_coords = table.reduce_poly(&deriv)?;
        let mut xid = vec![0u32; k];
        xid[i] = d as u32;
        let xid_coords = table.reduce_monomial(&xid);
        for (slot, (dp, xc)) in deriv_coords.iter().zip(&xid_coords).enumerate() {
            // t * [X_i^d] is well defined because the rewriting coordinates
            // of a non-basis monomial have zero constant term.
            let shifted = xc.mul_t().map_err(|_| {
                Error::ConsistencyFailure(format!(
                    "coordinate {slot} of [X{}^{d}] has a nonzero constant term",
                    i + 1
                ))
            })?;
            if !(dp + &shifted).is_zero() {
                return Err(Error::ConsistencyFailure(format!(
                    "relation dP/dX{} + t X{}^{d} does not vanish at coordinate {slot}",
                    i + 1,
                    i + 1
                )));
            }
        }
        report.relations_checked += 1;
    }

    // Pivot independence over everything reduced so far plus the box
    // [0, 2d-1]^k, which exercises multi-pivot monomials.
    let mut alt = ReductionTable::with_pivot(poly, d, cap, PivotRule::LargestIndex)?;
    let mut targets: Vec<Vec<u32>> = table.memo.keys().cloned().collect();
    let box_side = 2 * d as u64;
    for idx in 0..box_side.pow(k as u32) {
        targets.push(digits_base(idx, box_side, k));
    }
    targets.sort();
    targets.dedup();
    for beta in targets {
        let a = table.reduce_monomial(&beta);
        let b = alt.reduce_monomial(&beta);
        if a != b {
            return Err(Error::ConsistencyFailure(format!(
                "pivot choice changes the reduction of beta = {beta:?}"
            )));
        }
        report.pivot_reductions_compared += 1;
    }

    Ok(report)
}

/// Violations of the rewriting-coefficient degree/size bounds over every
/// memoized entry: for beta outside U and |gamma| < |beta|,
/// deg c <= |beta| - |gamma|, the constant coefficient vanishes, and
/// |c_l| <= 2^(l tau) d C(d+k, k+1)^(l-1); for |gamma| >= |beta| the
/// coordinate is zero.
pub fn reduction_bound_violations(table: &ReductionTable, tau: u32) -> Vec<String> {
    let d = table.d;
    let k = table.k;
    let mut violations = Vec::new();
    let binom = crate::bounds::binomial(d + k, k + 1);
    for (beta, coords) in table.memo_iter() {
        if table.basis.contains(beta) {
            continue;
        }
        let beta_total: usize = beta.iter().map(|&b| b as usize).sum();
        for (idx, c) in coords.iter().enumerate() {
            let gamma = table.basis.exponent(idx);
            let gamma_total: usize = gamma.iter().map(|&g| g as usize).sum();
            if gamma_total >= beta_total {
                if !c.is_zero() {
                    violations.push(format!(
                        "c[beta={beta:?}, gamma={gamma:?}] nonzero with |gamma| >= |beta|"
                    ));
                }
                continue;
            }
            if let Some(deg) = c.degree() {
                if deg > beta_total - gamma_total {
                    violations.push(format!(
                        "deg c[beta={beta:?}, gamma={gamma:?}] = {deg} exceeds |beta|-|gamma|"
                    ));
                }
            }
            if !c.coeff(0).is_zero() {
                violations.push(format!(
                    "c[beta={beta:?}, gamma={gamma:?}] has a nonzero constant coefficient"
                ));
            }
            for l in 1..=(beta_total - gamma_total) {
                let val = c.coeff(l);
                if val.is_zero() {
                    continue;
                }
                let bound = (Integer::from(1) << (l as u32 * tau))
                    * Integer::from(d)
                    * binom.pow(l as u32 - 1);
                if val.magnitude() > bound.magnitude() {
                    violations.push(format!(
                        "|c[beta={beta:?}, gamma={gamma:?}, l={l}]| exceeds the size bound"
                    ));
                }
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;

    fn sp(coeffs: &[i64]) -> SPoly {
        SPoly::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    fn worked_instance() -> MultiPoly {
        parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap()
    }

    #[test]
    fn basis_small_cases() {
        let b = MonomialBasisU::build(1, 2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(b.exponents(), &[vec![0], vec![1]]);
        let b = MonomialBasisU::build(2, 2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(
            b.exponents(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let b = MonomialBasisU::build(2, 3, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(b.dim(), 9);
        for (i, e) in b.exponents().iter().enumerate() {
            assert_eq!(b.index_of(e), Some(i));
        }
    }

    #[test]
    fn basis_cap_is_enforced() {
        assert!(matches!(
            MonomialBasisU::build(4, 9, DEFAULT_DIM_CAP),
            Err(Error::SizeOverflow { .. })
        ));
        assert!(MonomialBasisU::build(4, 8, DEFAULT_DIM_CAP).is_ok());
    }

    #[test]
    fn reduce_pure_square_term() {
        // P = X1^2 + 1: X^2 = -(2/t) X.
        let p = parse_poly("X1^2 + 1", None).unwrap();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let coords = table.reduce_monomial(&[2]);
        assert_eq!(coords, vec![SPoly::zero(), sp(&[0, -2])]);
    }

    #[test]
    fn reduce_basis_monomial_is_unit() {
        let p = worked_instance();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(table.reduce_monomial(&[0]), vec![SPoly::one(), SPoly::zero()]);
        assert_eq!(table.reduce_monomial(&[1]), vec![SPoly::zero(), SPoly::one()]);
    }

    #[test]
    fn reduce_worked_square() {
        // P = 2X1^2 - 2X1 + 1: X^2 = (2/t) - (4/t) X.
        let p = worked_instance();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let coords = table.reduce_monomial(&[2]);
        assert_eq!(coords, vec![sp(&[0, 2]), sp(&[0, -4])]);
    }

    #[test]
    fn mult_matrix_worked_instance() {
        let p = worked_instance();
        let r = p.build_r(2).unwrap();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let m = mult_matrix(&mut table, &r).unwrap();
        assert_eq!(m.get(0, 0), &sp(&[2]));
        assert_eq!(m.get(0, 1), &sp(&[0, -4]));
        assert_eq!(m.get(1, 0), &sp(&[-2]));
        assert_eq!(m.get(1, 1), &sp(&[2, 8]));
    }

    #[test]
    fn mult_matrix_one_is_identity() {
        let p = worked_instance();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let one = MultiPoly::constant(1, Integer::from(1));
        let m = mult_matrix(&mut table, &one).unwrap();
        assert_eq!(m, MultMatrix::identity(2));
    }

    #[test]
    fn mult_matrix_zero_is_zero() {
        let p = worked_instance();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let m = mult_matrix(&mut table, &MultiPoly::zero(1)).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn consistency_on_worked_instance() {
        let p = worked_instance();
        let report = verify_quotient_consistency(&p, 2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(report.relations_checked, 1);
        assert!(report.pivot_reductions_compared > 0);
    }

    #[test]
    fn consistency_on_symmetric_two_vars() {
        let p = parse_poly("X1^2 + X2^2 + 1", None).unwrap();
        let report = verify_quotient_consistency(&p, 2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(report.commuting_pairs, 1);
        assert_eq!(report.relations_checked, 2);
    }

    #[test]
    fn pivot_choice_does_not_matter_on_multi_pivot_monomials() {
        let p = parse_poly("X1^2 + 3*X1*X2 - X2^2 + X1 - 5", None).unwrap();
        let mut small = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let mut large =
            ReductionTable::with_pivot(&p, 2, DEFAULT_DIM_CAP, PivotRule::LargestIndex).unwrap();
        let beta = vec![3u32, 3u32];
        assert_eq!(small.reduce_monomial(&beta), large.reduce_monomial(&beta));
    }

    #[test]
    fn column_of_in_basis_products_is_constant() {
        // g = X1 and gamma = (0, *): gamma + supp(g) stays inside U for d = 2,
        // so those columns carry constants only.
        let p = parse_poly("X1^2 + X2^2 + 1", None).unwrap();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let g = MultiPoly::variable(2, 0).unwrap();
        let m = mult_matrix(&mut table, &g).unwrap();
        for col in 0..4 {
            let gamma = table.basis().exponent(col);
            if gamma[0] + 1 < 2 {
                for row in 0..4 {
                    let entry = m.get(row, col);
                    assert!(entry.degree().is_none_or(|deg| deg == 0));
                }
            }
        }
    }

    #[test]
    fn reduction_is_multiplicative_through_the_table() {
        // reduce(X^b1) * reduce(X^b2), recombined through the table, equals
        // reduce(X^(b1+b2)).
        let p = parse_poly("2*X1^2 - X1*X2 + X2^2 - 3*X1 + 1", None).unwrap();
        let mut table = ReductionTable::new(&p, 2, DEFAULT_DIM_CAP).unwrap();
        let pairs = [
            (vec![2u32, 0u32], vec![1u32, 2u32]),
            (vec![0, 2], vec![2, 1]),
            (vec![1, 1], vec![1, 1]),
        ];
        for (b1, b2) in pairs {
            let c1 = table.reduce_monomial(&b1);
            let c2 = table.reduce_monomial(&b2);
            let sum: Vec<u32> = b1.iter().zip(&b2).map(|(a, b)| a + b).collect();
            let direct = table.reduce_monomial(&sum);
            let dim = table.dim();
            let mut recombined = vec![SPoly::zero(); dim];
            for (i, c1i) in c1.iter().enumerate() {
                if c1i.is_zero() {
                    continue;
                }
                for (j, c2j) in c2.iter().enumerate() {
                    if c2j.is_zero() {
                        continue;
                    }
                    let gi = table.basis().exponent(i).to_vec();
                    let gj = table.basis().exponent(j).to_vec();
                    let prod: Vec<u32> = gi.iter().zip(&gj).map(|(a, b)| a + b).collect();
                    let reduced = table.reduce_monomial(&prod);
                    let weight = c1i * c2j;
                    for (slot, r) in recombined.iter_mut().zip(&reduced) {
                        if !r.is_zero() {
                            *slot = &*slot + &(r * &weight);
                        }
                    }
                }
            }
            assert_eq!(recombined, direct);
        }
    }
}
