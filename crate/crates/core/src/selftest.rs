//! Invariant suites behind `selftest` and the acceptance tests: exact
//! reproduction of the hand-worked instance, lemma degree/size bounds on
//! randomized instances, structural consistency of the quotient algebra,
//! agreement of the two characteristic-polynomial routes, and soundness of
//! the certified bound against the grid oracle.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Integer, Rational, SPoly};
use crate::bounds::{
    binomial, certified_lower_bound, closed_form_full, closed_form_simplified, example_family,
    family_minimum_upper_bound, theorem_induction_check, CertifyOptions, ClosedFormParams,
};
use crate::charpoly::interior_pipeline;
use crate::multipoly::{parse_poly, MultiPoly};
use crate::oracle::{direct_charpoly, grid_min, numeric_membership_check, GridSpec};
use crate::quotient::{
    mult_matrix, reduction_bound_violations, verify_quotient_consistency, ReductionTable,
    DEFAULT_DIM_CAP,
};

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome { name: name.to_string(), checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(message());
        }
    }
}

fn sp(coeffs: &[i64]) -> SPoly {
    SPoly::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

/// The hand-worked micro-instance P = 2X1^2 - 2X1 + 1: every intermediate
/// value of the pipeline, exactly.
pub fn micro_instance_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("micro-instance");
    let p = parse_poly("2*X1^2 - 2*X1 + 1", None).unwrap();
    let data = match interior_pipeline(&p, DEFAULT_DIM_CAP) {
        Ok(d) => d,
        Err(e) => {
            out.checked += 1;
            out.failures.push(format!("pipeline failed: {e}"));
            return out;
        }
    };
    let m = &data.matrix;
    out.check(m.get(0, 0) == &sp(&[2]), || "M_R[0][0] != 2".into());
    out.check(m.get(0, 1) == &sp(&[0, -4]), || "M_R[0][1] != -4s".into());
    out.check(m.get(1, 0) == &sp(&[-2]), || "M_R[1][0] != -2".into());
    out.check(m.get(1, 1) == &sp(&[2, 8]), || "M_R[1][1] != 2+8s".into());
    out.check(data.traces.get(1) == &sp(&[4, 8]), || "tr_1 != 4+8s".into());
    let c = &data.charpoly;
    out.check(c.b[0] == SPoly::one(), || "b[0] != 1".into());
    out.check(c.b[1] == sp(&[-4, -8]), || "b[1] != -(4+8s)".into());
    out.check(c.b[2] == sp(&[4, 8]), || "b[2] != 4+8s".into());
    out.check(c.l0 == 1, || format!("l0 = {} != 1", c.l0));
    out.check(
        c.s0 == vec![Integer::zero(), Integer::from(-8), Integer::from(8)],
        || "S(0,Y) != -8Y + 8".into(),
    );
    out.check(data.cauchy == Some(rat(2, 1)), || "Cauchy value != 2".into());
    out.check(data.bound == Some(rat(1, 4)), || "interior bound != 1/4".into());

    match certified_lower_bound(&p, &CertifyOptions::default()) {
        Ok(report) => {
            out.check(report.global_bound == rat(1, 4), || {
                format!("global bound {} != 1/4", report.global_bound)
            });
        }
        Err(e) => out.check(false, || format!("certified bound failed: {e}")),
    }

    // Independent route: the determinant oracle agrees coefficient-wise.
    match direct_charpoly(&data.matrix) {
        Ok(coeffs) => out.check(coeffs == c.b, || "determinant oracle disagrees".into()),
        Err(e) => out.check(false, || format!("determinant oracle failed: {e}")),
    }
    out
}

/// Exact closed-form values plus the domination of the simplified form on a
/// parameter grid.
pub fn closed_form_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("closed-forms");
    let full_121 = closed_form_full(&ClosedFormParams::new(1, 2, 1));
    out.check(full_121 == rat(1, 36864), || format!("full(1,2,1) = {full_121}"));
    let simpl_121 = closed_form_simplified(&ClosedFormParams::new(1, 2, 1));
    out.check(
        simpl_121 == Rational::new(Integer::one(), Integer::one() << 16),
        || format!("simplified(1,2,1) = {simpl_121}"),
    );
    let full_221 = closed_form_full(&ClosedFormParams::new(2, 2, 1));
    out.check(
        full_221 == Rational::new(Integer::one(), Integer::one() << 36),
        || format!("full(2,2,1) = {full_221}"),
    );
    for d in 1..=5 {
        for k in 1..=3 {
            for tau in 1..=8 {
                let p = ClosedFormParams::new(k, d, tau);
                out.check(closed_form_simplified(&p) <= closed_form_full(&p), || {
                    format!("simplified > full at (k={k}, d={d}, tau={tau})")
                });
            }
        }
    }
    out
}

/// Random polynomial with exact total degree d, k variables and
/// coefficients of bitsize at most tau_max.
fn random_instance(rng: &mut ChaCha8Rng, k: usize, d: usize, tau_max: u32) -> MultiPoly {
    let cmax: i64 = (1i64 << tau_max) - 1;
    let mut poly = MultiPoly::zero(k);
    // Every exponent vector with |alpha| <= d, kept with probability 1/2.
    let mut stack = vec![(Vec::new(), 0usize)];
    let mut exponents: Vec<Vec<u32>> = Vec::new();
    while let Some((prefix, used)) = stack.pop() {
        if prefix.len() == k {
            exponents.push(prefix);
            continue;
        }
        for e in 0..=(d - used) {
            let mut next = prefix.clone();
            next.push(e as u32);
            stack.push((next, used + e));
        }
    }
    for e in exponents {
        if rng.gen_bool(0.5) {
            let c = loop {
                let c = rng.gen_range(-cmax..=cmax);
                if c != 0 {
                    break c;
                }
            };
            poly.add_term(e, Integer::from(c));
        }
    }
    // Pin the total degree by forcing one term of degree exactly d.
    let mut top = vec![0u32; k];
    let mut remaining = d as u32;
    for slot in top.iter_mut().take(k - 1) {
        let e = rng.gen_range(0..=remaining);
        *slot = e;
        remaining -= e;
    }
    top[k - 1] = remaining;
    let c = loop {
        let c = rng.gen_range(-cmax..=cmax);
        if c != 0 {
            break c;
        }
    };
    let mut e = top.clone();
    e.rotate_left(rng.gen_range(0..k));
    poly.add_term(e.clone(), Integer::from(c) - poly.coeff(&e));
    poly
}

/// Degree and size bounds for every computed rewriting coefficient, trace
/// and characteristic coefficient on randomized instances, plus the
/// coefficient-mass bound for powers of R.
pub fn lemma_bounds_suite(instances: usize, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("lemma-bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut produced = 0;
    while produced < instances {
        let k = rng.gen_range(1..=2usize);
        let d = rng.gen_range(2..=4usize);
        let tau_max = rng.gen_range(1..=4u32);
        let poly = random_instance(&mut rng, k, d, tau_max);
        if poly.total_degree() != d || poly.is_zero() {
            continue;
        }
        produced += 1;
        let inst = crate::multipoly::ProblemInstance::new(poly.clone()).unwrap();
        let r_poly = poly.build_r(d).unwrap();
        let mut table = ReductionTable::new(&poly, d, DEFAULT_DIM_CAP).unwrap();
        let matrix = match mult_matrix(&mut table, &r_poly) {
            Ok(m) => m,
            Err(e) => {
                out.check(false, || format!("mult_matrix failed on {poly}: {e}"));
                continue;
            }
        };
        // Rewriting coefficient bounds over everything memoized.
        let violations = reduction_bound_violations(&table, inst.tau);
        out.check(violations.is_empty(), || {
            format!("c bounds violated on {poly}: {}", violations.join("; "))
        });
        // Trace and characteristic bounds are enforced inside the pipeline;
        // any violation surfaces as an error here.
        let dim = table.dim();
        match crate::charpoly::power_traces(&matrix, dim, &inst) {
            Ok(traces) => match crate::charpoly::newton_charpoly(&traces, dim, &inst) {
                Ok(_) => out.check(true, String::new),
                Err(e) => out.check(false, || format!("charpoly bounds on {poly}: {e}")),
            },
            Err(e) => out.check(false, || format!("trace bounds on {poly}: {e}")),
        }
        // Coefficient mass of R^n for n <= 3.
        let base = (Integer::one() << inst.tau) * binomial(d + k, k + 1);
        let mut power = MultiPoly::constant(k, Integer::one());
        for n in 1..=3u32 {
            power = power.mul(&r_poly);
            let mass: Integer = power.terms().map(|(_, c)| c.abs()).sum();
            out.check(mass <= base.pow(n), || {
                format!("coefficient mass of R^{n} exceeds (2^tau C)^{n} on {poly}")
            });
        }
    }
    out
}

/// Structural checks: commutation of the variable multiplication matrices,
/// vanishing of the defining relations, pivot independence, and agreement
/// of Newton's identities with the determinant oracle for d^k <= 9.
pub fn consistency_suite(instances: usize, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("quotient-consistency");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut produced = 0;
    while produced < instances {
        // Dimensions d^k <= 9 so the determinant oracle stays applicable:
        // 2, 3, 4 at k = 1; 4, 9 at k = 2; 8 at k = 3.
        let k = rng.gen_range(1..=3usize);
        let d_choices: &[usize] = match k {
            1 => &[2, 3, 4],
            2 => &[2, 3],
            _ => &[2],
        };
        let d = d_choices[rng.gen_range(0..d_choices.len())];
        let tau_max = rng.gen_range(1..=4u32);
        let poly = random_instance(&mut rng, k, d, tau_max);
        if poly.total_degree() != d || poly.is_zero() {
            continue;
        }
        produced += 1;
        match verify_quotient_consistency(&poly, d, DEFAULT_DIM_CAP) {
            Ok(_) => out.check(true, String::new),
            Err(e) => out.check(false, || format!("consistency on {poly}: {e}")),
        }
        match interior_pipeline(&poly, DEFAULT_DIM_CAP) {
            Ok(data) => match direct_charpoly(&data.matrix) {
                Ok(direct) => out.check(direct == data.charpoly.b, || {
                    format!("Newton vs determinant mismatch on {poly}")
                }),
                Err(e) => out.check(false, || format!("determinant oracle on {poly}: {e}")),
            },
            Err(e) => out.check(false, || format!("pipeline on {poly}: {e}")),
        }
    }
    out
}

/// Soundness on randomized positive instances Q^2 + c: the certified bound
/// is positive and never exceeds the grid minimum.
pub fn soundness_suite(instances: usize, seed: u64, grid_denominators: &[u64]) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("soundness");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut produced = 0;
    while produced < instances {
        let k = rng.gen_range(1..=2usize);
        let dq = rng.gen_range(1..=2usize);
        let q = random_instance(&mut rng, k, dq, 2);
        if q.is_zero() || q.is_constant() {
            continue;
        }
        produced += 1;
        let c = rng.gen_range(1..=4i64);
        let poly = q.pow(2).add(&MultiPoly::constant(k, Integer::from(c)));
        let report = match certified_lower_bound(&poly, &CertifyOptions::default()) {
            Ok(r) => r,
            Err(e) => {
                out.check(false, || format!("certified bound failed on {poly}: {e}"));
                continue;
            }
        };
        out.check(report.global_bound > Rational::zero(), || {
            format!("non-positive bound on {poly}")
        });
        for &n in grid_denominators {
            let (grid_value, _) = grid_min(&poly, &GridSpec::new(k, n)).unwrap();
            out.check(grid_value > Rational::zero(), || {
                format!("grid sample <= 0 on {poly} (N = {n})")
            });
            out.check(report.global_bound <= grid_value, || {
                format!(
                    "bound {} exceeds grid minimum {} on {poly} (N = {n})",
                    report.global_bound, grid_value
                )
            });
        }
    }
    out
}

/// The doubly exponential family: the certified bound is positive and at
/// most the witnessed upper bound 2^(-tau (d/2)^k) for the true minimum.
pub fn family_suite(cases: &[(usize, usize, u32)]) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("example-family");
    for &(k, d, tau) in cases {
        let poly = match example_family(k, d, tau) {
            Ok(p) => p,
            Err(e) => {
                out.check(false, || format!("family({k},{d},{tau}) failed: {e}"));
                continue;
            }
        };
        let upper = family_minimum_upper_bound(k, d, tau);
        match certified_lower_bound(&poly, &CertifyOptions::default()) {
            Ok(report) => {
                out.check(report.global_bound > Rational::zero(), || {
                    format!("family({k},{d},{tau}): non-positive bound")
                });
                out.check(report.global_bound <= upper, || {
                    format!(
                        "family({k},{d},{tau}): bound {} exceeds the minimum's upper bound {upper}",
                        report.global_bound
                    )
                });
            }
            Err(e) => out.check(false, || format!("family({k},{d},{tau}): {e}")),
        }
    }
    out
}

/// Exact verification of the recursion-closing inequality on a grid.
pub fn induction_suite(
    d_max: usize,
    k_max: usize,
    tau_max: u32,
) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("induction-inequality");
    let report = theorem_induction_check(2..=d_max, 1..=k_max, 1..=tau_max);
    out.checked += report.checked;
    for (d, k, tau) in report.violations {
        out.failures.push(format!("inequality fails at (d={d}, k={k}, tau={tau})"));
    }
    out
}

/// Numeric spot checks of the rewriting identity for k = 1.
pub fn membership_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("numeric-membership");
    let tol = Rational::new(Integer::one(), Integer::from(10).pow(20));
    let cases: &[(&str, u32)] = &[("2*X1^2 - 2*X1 + 1", 2), ("X1^2 + 1", 3)];
    for (text, beta) in cases {
        let poly = parse_poly(text, None).unwrap();
        match numeric_membership_check(&poly, &[*beta], &rat(1, 10), 30) {
            Ok(check) => out.check(check.max_residual < tol, || {
                format!("residual {} too large for {text}", check.max_residual)
            }),
            Err(e) => out.check(false, || format!("membership check on {text}: {e}")),
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelfTestScale {
    Quick,
    Full,
}

/// Runs every suite at the requested scale.
pub fn run_selftest(scale: SelfTestScale) -> Vec<SuiteOutcome> {
    let mut outcomes = vec![micro_instance_suite(), closed_form_suite()];
    match scale {
        SelfTestScale::Quick => {
            outcomes.push(lemma_bounds_suite(8, 11));
            outcomes.push(consistency_suite(8, 23));
            outcomes.push(soundness_suite(4, 37, &[20]));
            outcomes.push(family_suite(&[(1, 4, 2)]));
            outcomes.push(induction_suite(3, 2, 4));
        }
        SelfTestScale::Full => {
            outcomes.push(lemma_bounds_suite(50, 11));
            outcomes.push(consistency_suite(50, 23));
            outcomes.push(soundness_suite(12, 37, &[50, 100]));
            outcomes.push(family_suite(&[(1, 4, 2), (1, 4, 4), (2, 4, 2)]));
            outcomes.push(induction_suite(4, 3, 8));
        }
    }
    outcomes.push(membership_suite());
    outcomes
}
