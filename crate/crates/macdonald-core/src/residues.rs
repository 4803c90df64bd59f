//! Residue calculus for the kernel integrals: closed-form simple-pole
//! residues at points x_j = y_{i_j} q^{l_j}, the two-variable unit identity
//! behind them, single-variable residue sums, and the end-to-end check that
//! the residue sum reproduces b_lambda P_lambda(y) <P_lambda, P_lambda>.
//!
//! The integrand throughout is
//!
//! prod_{i <= m, j <= n} 1/(y_i/x_j; q)_k * Delta(x) psi(x) dx/(x_1...x_n),
//!
//! whose poles in each variable are simple for generic y. Every closed-form
//! evaluation here is guarded twice: a genericity check confirms no
//! unmatched factor vanishes at the evaluation point, and brute-force
//! series-expansion residues (one variable at a time, no cancellation
//! identities) reproduce the closed forms on small instances.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::macdonald::MacdonaldBasis;
use crate::partitions::{b_lambda_armleg, Partition};
use crate::qfield::{gauss_binomial, pochhammer, pochhammer_q, BigRat, QRat};
use crate::symlaurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueError {
    /// Some unmatched factor vanishes at the evaluation point; the caller
    /// should resample y.
    NonGenericSample(String),
}

impl fmt::Display for ResidueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueError::NonGenericSample(msg) => {
                write!(f, "non-generic sample ({msg}); resample y")
            }
        }
    }
}

impl std::error::Error for ResidueError {}

/// Where an iterated residue is taken: variable j sits at y_{i_j} q^{l_j}.
/// Assignments are 0-indexed into the y-sample and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePoint {
    assignment: Vec<usize>,
    exponents: Vec<usize>,
}

impl ResiduePoint {
    pub fn new(assignment: Vec<usize>, exponents: Vec<usize>) -> ResiduePoint {
        assert_eq!(
            assignment.len(),
            exponents.len(),
            "assignment and exponent lists must have equal length"
        );
        for (a, i) in assignment.iter().enumerate() {
            assert!(
                !assignment[..a].contains(i),
                "assignment indices must be pairwise distinct"
            );
        }
        ResiduePoint {
            assignment,
            exponents,
        }
    }

    /// The identity assignment i_j = j with the given exponents.
    pub fn diagonal(exponents: Vec<usize>) -> ResiduePoint {
        let assignment = (0..exponents.len()).collect();
        ResiduePoint {
            assignment,
            exponents,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// The evaluation point x_j = y_{i_j} q^{l_j} as exact scalars.
    pub fn evaluate(&self, y: &YSample) -> Vec<QRat> {
        self.assignment
            .iter()
            .zip(&self.exponents)
            .map(|(&i, &l)| {
                QRat::from_bigrat(y.values()[i].clone()).mul(&QRat::q_pow(l as i64))
            })
            .collect()
    }
}

/// Rational evaluation values for the y-variables. Genericity (nonzero,
/// pairwise distinct) is not demanded at construction; [`genericity_check`]
/// gates every use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSample {
    values: Vec<BigRat>,
}

impl YSample {
    pub fn new(values: Vec<BigRat>) -> YSample {
        YSample { values }
    }

    pub fn from_integers(v: &[i64]) -> YSample {
        YSample {
            values: v.iter().map(|&x| BigRat::from_integer(x.into())).collect(),
        }
    }

    /// Draw m pairwise distinct integers in 2..=97. Distinct integers admit
    /// no relation y_a q^c = y_b q^d with q formal, so the sample is always
    /// generic; the check downstream stays as a safety net.
    pub fn sample(m: usize, rng: &mut impl Rng) -> YSample {
        assert!(m <= 96, "cannot draw {m} distinct values from 2..=97");
        let mut values: Vec<i64> = Vec::with_capacity(m);
        while values.len() < m {
            let v = rng.gen_range(2..=97i64);
            if !values.contains(&v) {
                values.push(v);
            }
        }
        YSample::from_integers(&values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigRat] {
        &self.values
    }
}

fn one_minus(x: &QRat) -> QRat {
    QRat::one().sub(x)
}

/// The scalar (q^{-l};q)_l (q;q)_{k-1-l} that a simple-pole residue at
/// x = y q^l divides by.
fn pole_constant(l: usize, k: usize) -> QRat {
    pochhammer(&QRat::q_pow(-(l as i64)), l).mul(&pochhammer(&QRat::q(), k - 1 - l))
}

/// Confirm the closed-form evaluation at `pt` is valid: all y-values
/// nonzero, every unmatched kernel factor (y_i/x_j; q)_k with i != i_j
/// nonzero at the point, and every Delta factor nonzero.
pub fn genericity_check(
    pt: &ResiduePoint,
    y: &YSample,
    n: usize,
    m: usize,
    k: usize,
) -> Result<(), ResidueError> {
    assert_eq!(pt.assignment.len(), n, "residue point arity mismatch");
    assert_eq!(y.len(), m, "y-sample arity mismatch");
    assert!(m >= n, "need at least as many y-values as variables");
    assert!(pt.assignment.iter().all(|&i| i < m), "assignment out of range");
    assert!(pt.exponents.iter().all(|&l| l < k), "exponent out of range");
    for (i, v) in y.values().iter().enumerate() {
        if v.is_zero() {
            return Err(ResidueError::NonGenericSample(format!("y_{} = 0", i + 1)));
        }
    }
    let x_star = pt.evaluate(y);
    for (j, xj) in x_star.iter().enumerate() {
        for i in 0..m {
            if i == pt.assignment[j] {
                continue;
            }
            let ratio = QRat::from_bigrat(y.values()[i].clone()).div(xj);
            for s in 0..k {
                if one_minus(&ratio.mul(&QRat::q_pow(s as i64))).is_zero() {
                    return Err(ResidueError::NonGenericSample(format!(
                        "factor (y_{}/x_{}; q)_{k} vanishes at the point",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let ratio = x_star[a].div(&x_star[b]);
            for s in 0..k {
                if one_minus(&ratio.mul(&QRat::q_pow(s as i64))).is_zero() {
                    return Err(ResidueError::NonGenericSample(format!(
                        "Delta factor (x_{}/x_{}; q)_{k} vanishes at the point",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Closed form of the two-variable residue identity with y symbolic.
///
/// For a Laurent polynomial psi(x_1, x_2) and 0 <= l <= k-1, the residue at
/// x_1 = y q^l of
///
/// (x_1/x_2;q)_k (x_2/x_1;q)_k / [ (y/x_1;q)_k (y/x_2;q)_k ] psi dx_1/x_1
///
/// equals
///
/// (y q^l/x_2;q)_k (x_2 q^{-l}/y;q)_k / [ (q^{-l};q)_l (q;q)_{k-1-l} (y/x_2;q)_k ]
///   * psi(y q^l, x_2),
///
/// and (y/x_2;q)_k divides the numerator, so the result is a Laurent
/// polynomial. Variable slots: input psi uses (x_1, x_2); the output uses
/// (y, x_2).
pub fn residue_31(l: usize, k: usize, psi: &LaurentPoly) -> LaurentPoly {
    assert!(k >= 1, "k must be a positive integer");
    assert!(l < k, "need 0 <= l <= k-1");
    assert_eq!(psi.n_vars(), 2, "psi must be a two-variable polynomial");
    if psi.is_zero() {
        return LaurentPoly::zero(2);
    }
    // slot 0 now means y: psi(y q^l, x_2)
    let mut num = psi.scale_var(0, &QRat::q_pow(l as i64));
    for s in 0..k {
        num = num.mul_binomial(&QRat::q_pow((l + s) as i64), &[1, -1]);
        num = num.mul_binomial(&QRat::q_pow(s as i64 - l as i64), &[-1, 1]);
    }
    let mut res = num;
    for s in 0..k {
        res = res
            .div_exact_binomial(&QRat::q_pow(s as i64), &[1, -1])
            .expect("(y/x_2;q)_k must divide the matched numerator");
    }
    res.scalar_mul(&pole_constant(l, k).checked_inv().unwrap())
}

/// Simple-pole residue extracted by series expansion, used as the
/// independent check on the closed forms.
///
/// Computes the residue at x = v (variable slot `var`) of
///
/// numer(x) / ( x * prod_r (1 - r/x) ) dx,
///
/// where each root r and the pole location v are monomials in the other
/// variables and v matches exactly one root. The variable is shifted to
/// x = v + e, the denominator expanded as e * g(e), and the residue read off
/// as the e^0 coefficient of the numerator divided by the monomial g(0).
/// No Pochhammer cancellation identities are involved.
fn residue_by_expansion(
    numer: &LaurentPoly,
    var: usize,
    roots: &[LaurentPoly],
    v: &LaurentPoly,
) -> LaurentPoly {
    let nv = numer.n_vars();
    let r_count = roots.len() as i64;
    // clear negative powers of x: numer * x^mm over x^{mm+1-R} prod (x - r)
    let mm = (r_count - 1).max(-numer.min_exp(var).unwrap_or(0).min(0));
    let mut shift = vec![0i64; nv];
    shift[var] = mm;
    let cleared = numer.mul_monomial(&QRat::one(), &shift);
    // substitute x -> v + e, reusing the slot for e
    let eps = LaurentPoly::var(nv, var);
    let subst = v.add(&eps);
    let a0 = cleared.subst_var_poly(var, &subst).coeff_of_var(var, 0);
    let mut den = LaurentPoly::one(nv);
    for _ in 0..(mm + 1 - r_count) {
        den = den.mul(&subst);
    }
    for r in roots {
        den = den.mul(&v.sub(r).add(&eps));
    }
    assert!(
        den.coeff_of_var(var, 0).is_zero(),
        "pole location does not match exactly one root"
    );
    let g0 = den.coeff_of_var(var, 1);
    assert_eq!(g0.num_terms(), 1, "denominator derivative is not a monomial");
    let (ge, gc) = g0.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
    let inv_exp: Vec<i64> = ge.iter().map(|d| -d).collect();
    a0.mul_monomial(&gc.checked_inv().expect("simple pole"), &inv_exp)
}

/// Brute-force left side of the two-variable identity, times (y/x_2;q)_k.
///
/// Works in three slots (x_1, x_2, y): expands Delta(x_1,x_2) psi and takes
/// the series residue at x_1 = y q^l against the denominator
/// x_1 (y/x_1;q)_k. The omitted 1/(y/x_2;q)_k factor is constant in x_1, so
/// the result equals residue_31 * (y/x_2;q)_k; callers multiply the closed
/// form by the same factor to compare.
pub fn residue_31_by_series(l: usize, k: usize, psi: &LaurentPoly) -> LaurentPoly {
    assert!(l < k, "need 0 <= l <= k-1");
    assert_eq!(psi.n_vars(), 2, "psi must be a two-variable polynomial");
    let mut numer = psi.embed(3, &[0, 1]);
    for s in 0..k {
        numer = numer.mul_binomial(&QRat::q_pow(s as i64), &[1, -1, 0]);
        numer = numer.mul_binomial(&QRat::q_pow(s as i64), &[-1, 1, 0]);
    }
    let y = LaurentPoly::var(3, 2);
    let roots: Vec<LaurentPoly> = (0..k)
        .map(|s| y.scalar_mul(&QRat::q_pow(s as i64)))
        .collect();
    let v = y.scalar_mul(&QRat::q_pow(l as i64));
    residue_by_expansion(&numer, 0, &roots, &v)
}

#[derive(Clone, Debug)]
pub struct Eq31Report {
    pub k: usize,
    pub cases_checked: usize,
    pub failures: Vec<String>,
}

impl Eq31Report {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compare the closed form against the series residue for every l in
/// 0..k and every monomial psi = x_1^a x_2^b with a, b <= max_exp.
pub fn verify_31(k: usize, max_exp: i64) -> Eq31Report {
    let mut report = Eq31Report {
        k,
        cases_checked: 0,
        failures: Vec::new(),
    };
    for l in 0..k {
        for a in 0..=max_exp {
            for b in 0..=max_exp {
                let psi = LaurentPoly::monomial(2, vec![a, b], QRat::one());
                let mut closed = residue_31(l, k, &psi).embed(3, &[2, 1]);
                for s in 0..k {
                    closed = closed.mul_binomial(&QRat::q_pow(s as i64), &[0, -1, 1]);
                }
                report.cases_checked += 1;
                if closed != residue_31_by_series(l, k, &psi) {
                    report
                        .failures
                        .push(format!("l={l} psi=x1^{a} x2^{b}"));
                }
            }
        }
    }
    report
}

/// Closed-form iterated residue of
///
/// prod_{i <= m, j <= n} 1/(y_i/x_j;q)_k Delta(x) psi(x) dx/(x_1...x_n)
///
/// at x_j = y_{i_j} q^{l_j}: drop each matched vanishing factor, evaluate
/// everything else at the point, and divide by (q^{-l_j};q)_{l_j}
/// (q;q)_{k-1-l_j} per variable.
pub fn iterated_residue(
    pt: &ResiduePoint,
    y: &YSample,
    psi: &LaurentPoly,
    n: usize,
    m: usize,
    k: usize,
) -> Result<QRat, ResidueError> {
    assert_eq!(psi.n_vars(), n, "psi arity mismatch");
    genericity_check(pt, y, n, m, k)?;
    let x_star = pt.evaluate(y);
    let mut result = psi.eval(&x_star);
    if result.is_zero() {
        return Ok(result);
    }
    // Delta(x*), factor by factor
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let ratio = x_star[a].div(&x_star[b]);
            for s in 0..k {
                result = result.mul(&one_minus(&ratio.mul(&QRat::q_pow(s as i64))));
            }
        }
    }
    // unmatched kernel factors stay in the denominator
    for (j, xj) in x_star.iter().enumerate() {
        for i in 0..m {
            if i == pt.assignment[j] {
                continue;
            }
            let ratio = QRat::from_bigrat(y.values()[i].clone()).div(xj);
            for s in 0..k {
                result = result.div(&one_minus(&ratio.mul(&QRat::q_pow(s as i64))));
            }
        }
    }
    for &l in pt.exponents() {
        result = result.div(&pole_constant(l, k));
    }
    Ok(result)
}

/// The same residue by sequential series expansion, x_n first down to x_1,
/// with no cancellation shortcuts. Intended as the small-n oracle; cost
/// grows quickly with n.
pub fn iterated_residue_by_series(
    pt: &ResiduePoint,
    y: &YSample,
    psi: &LaurentPoly,
    n: usize,
    m: usize,
    k: usize,
) -> Result<QRat, ResidueError> {
    assert_eq!(psi.n_vars(), n, "psi arity mismatch");
    genericity_check(pt, y, n, m, k)?;
    let x_star = pt.evaluate(y);
    // numer = Delta(x) psi(x), expanded symbolically in all n variables
    let mut numer = psi.clone();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut e = vec![0i64; n];
            e[a] = 1;
            e[b] = -1;
            for s in 0..k {
                numer = numer.mul_binomial(&QRat::q_pow(s as i64), &e);
            }
        }
    }
    let roots: Vec<LaurentPoly> = y
        .values()
        .iter()
        .flat_map(|yv| {
            (0..k).map(|s| {
                LaurentPoly::constant(n, QRat::from_bigrat(yv.clone()).mul(&QRat::q_pow(s as i64)))
            })
        })
        .collect();
    for j in (0..n).rev() {
        let v = LaurentPoly::constant(n, x_star[j].clone());
        numer = residue_by_expansion(&numer, j, &roots, &v);
    }
    Ok(numer.constant_term())
}

/// Both evaluations of the single-variable residue sum
///
/// sum_{l=0}^{k-1} Res_{x=q^l} x^p / (1/x;q)_k dx/x,
///
/// returned as (term-by-term sum, closed form):
/// sum_l q^{lp} / [ (q^{-l};q)_l (q;q)_{k-1-l} ] and
/// (q^{p+1};q)_{k-1} / (q;q)_{k-1}. The two must agree exactly.
pub fn single_var_residue_sum(p: usize, k: usize) -> (QRat, QRat) {
    assert!(k >= 1, "k must be a positive integer");
    let mut term_sum = QRat::zero();
    for l in 0..k {
        let term = QRat::q_pow((l * p) as i64).div(&pole_constant(l, k));
        term_sum = term_sum.add(&term);
    }
    let closed = pochhammer_q(p as i64 + 1, k - 1).div(&pochhammer_q(1, k - 1));
    (term_sum, closed)
}

#[derive(Clone, Debug)]
pub struct ResidueSumReport {
    pub max_p: usize,
    pub max_k: usize,
    pub cases_checked: usize,
    pub failures: Vec<(usize, usize)>,
}

impl ResidueSumReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check both paths of [`single_var_residue_sum`] agree for all
/// p <= max_p, 1 <= k <= max_k.
pub fn verify_residue_sums(max_p: usize, max_k: usize) -> ResidueSumReport {
    let mut report = ResidueSumReport {
        max_p,
        max_k,
        cases_checked: 0,
        failures: Vec::new(),
    };
    for k in 1..=max_k {
        for p in 0..=max_p {
            let (term_sum, closed) = single_var_residue_sum(p, k);
            report.cases_checked += 1;
            if term_sum != closed {
                report.failures.push((p, k));
            }
        }
    }
    report
}

/// Diagonal residue sum: sum over all exponent tuples 0 <= l_j <= k-1 of the
/// iterated residue at x = (y_1 q^{l_1}, ..., y_n q^{l_n}) with psi =
/// P_lambda. The permutation sum and the 1/n! prefactor cancel against the
/// symmetry of the integrand, leaving the identity assignment only.
pub fn residue_sum_33(
    lambda: &Partition,
    n: usize,
    k: usize,
    y: &YSample,
    cache: &mut MacdonaldBasis,
) -> Result<QRat, ResidueError> {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    assert_eq!(y.len(), n, "the diagonal sum needs m = n");
    let p_lambda = cache.polynomial(lambda);
    let mut total = QRat::zero();
    let mut exponents = vec![0usize; n];
    loop {
        let pt = ResiduePoint::diagonal(exponents.clone());
        total = total.add(&iterated_residue(&pt, y, &p_lambda, n, n, k)?);
        // odometer over {0..k-1}^n
        let mut j = 0;
        loop {
            if j == n {
                return Ok(total);
            }
            exponents[j] += 1;
            if exponents[j] < k {
                break;
            }
            exponents[j] = 0;
            j += 1;
        }
    }
}

/// The full form of the same sum, over all permutation assignments and
/// exponent tuples, divided by n!. Equality with [`residue_sum_33`] is the
/// symmetry collapse taken for granted there; this path exists to check it.
pub fn residue_sum_33_sigma(
    lambda: &Partition,
    n: usize,
    k: usize,
    y: &YSample,
    cache: &mut MacdonaldBasis,
) -> Result<QRat, ResidueError> {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    assert_eq!(y.len(), n, "the sigma sum needs m = n");
    let p_lambda = cache.polynomial(lambda);
    let mut perms = Vec::new();
    permutations(n, &mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
    let mut total = QRat::zero();
    for sigma in &perms {
        let mut exponents = vec![0usize; n];
        loop {
            let pt = ResiduePoint::new(sigma.clone(), exponents.clone());
            total = total.add(&iterated_residue(&pt, y, &p_lambda, n, n, k)?);
            let mut j = 0;
            let mut done = false;
            loop {
                if j == n {
                    done = true;
                    break;
                }
                exponents[j] += 1;
                if exponents[j] < k {
                    break;
                }
                exponents[j] = 0;
                j += 1;
            }
            if done {
                break;
            }
        }
    }
    let n_factorial: i64 = (1..=n as i64).product();
    Ok(total.div(&QRat::from_int(n_factorial)))
}

fn permutations(n: usize, pool: &mut Vec<usize>, fixed: usize, out: &mut Vec<Vec<usize>>) {
    if fixed == n {
        out.push(pool.clone());
        return;
    }
    for i in fixed..n {
        pool.swap(fixed, i);
        permutations(n, pool, fixed + 1, out);
        pool.swap(fixed, i);
    }
}

#[derive(Clone, Debug)]
pub struct Eq33Sample {
    pub y: Vec<BigRat>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Eq33Report {
    pub lambda: Partition,
    pub n: usize,
    pub k: usize,
    pub samples: Vec<Eq33Sample>,
}

impl Eq33Report {
    pub fn pass(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.pass)
    }

    pub fn to_json(&self) -> Value {
        let samples: Vec<Value> = self
            .samples
            .iter()
            .map(|s| {
                json!({
                    "y": s.y.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "pass": s.pass,
                })
            })
            .collect();
        json!({
            "identity": "eq33",
            "lambda": self.lambda.padded(),
            "n": self.n,
            "k": self.k,
            "samples": samples,
            "pass": self.pass(),
        })
    }
}

/// For `samples` independent generic y-samples, check
///
/// residue_sum_33(lambda) = b_lambda * P_lambda(y) * <P_lambda, P_lambda>
///
/// exactly. Non-generic draws are retried a bounded number of times; a
/// sample that stays non-generic is recorded as a failure.
pub fn verify_33(
    lambda: &Partition,
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
    cache: &mut MacdonaldBasis,
) -> Eq33Report {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_lambda = cache.polynomial(lambda);
    let scalar = b_lambda_armleg(lambda, k).mul(&cache.norm(lambda));
    let mut report = Eq33Report {
        lambda: lambda.clone(),
        n,
        k,
        samples: Vec::new(),
    };
    const RETRIES: usize = 16;
    for _ in 0..samples {
        let mut outcome = None;
        for _ in 0..RETRIES {
            let y = YSample::sample(n, &mut rng);
            match residue_sum_33(lambda, n, k, &y, cache) {
                Ok(lhs) => {
                    let point: Vec<QRat> = y
                        .values()
                        .iter()
                        .map(|v| QRat::from_bigrat(v.clone()))
                        .collect();
                    let rhs = scalar.mul(&p_lambda.eval(&point));
                    outcome = Some(Eq33Sample {
                        y: y.values().to_vec(),
                        pass: lhs == rhs,
                    });
                    break;
                }
                Err(ResidueError::NonGenericSample(_)) => continue,
            }
        }
        report.samples.push(outcome.unwrap_or(Eq33Sample {
            y: Vec::new(),
            pass: false,
        }));
    }
    report
}

#[derive(Clone, Debug)]
pub struct LemmaN1Report {
    pub k: usize,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
}

impl LemmaN1Report {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The n = 1 instance of the residue lemma with y symbolic, checked
/// coefficient-wise. For a one-variable polynomial psi,
///
/// [ psi(x) / (y/x;q)_k dx/x ]_1 as a y-series (the left side) is the
/// polynomial sum_r [r+k-1 choose r]_q psi_r y^r, and the residue sum (the
/// right side) is sum_l psi(y q^l) / [ (q^{-l};q)_l (q;q)_{k-1-l} ].
/// Both sides live in one variable standing for y.
pub fn verify_lemma_n1(psi: &LaurentPoly, k: usize) -> LemmaN1Report {
    assert_eq!(psi.n_vars(), 1, "psi must be a one-variable polynomial");
    assert!(
        psi.min_exp(0).unwrap_or(0) >= 0,
        "psi must be a polynomial, not a Laurent polynomial"
    );
    let mut lhs = LaurentPoly::zero(1);
    let top = psi.max_exp(0).unwrap_or(0);
    for r in 0..=top {
        let c = psi.coeff(&[r]);
        if c.is_zero() {
            continue;
        }
        let weight = gauss_binomial(r as usize + k - 1, r as usize);
        lhs = lhs.add(&LaurentPoly::monomial(1, vec![r], c.mul(&weight)));
    }
    let mut rhs = LaurentPoly::zero(1);
    for l in 0..k {
        let shifted = psi.scale_var(0, &QRat::q_pow(l as i64));
        rhs = rhs.add(&shifted.scalar_mul(&pole_constant(l, k).checked_inv().unwrap()));
    }
    LemmaN1Report { k, lhs, rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::norm_formula;
    use crate::qfield::QPoly;
    use num_bigint::BigInt;

    fn qr(num: &[i64], den: &[i64]) -> QRat {
        let to_poly = |cs: &[i64]| {
            QPoly::from_coeffs(
                cs.iter()
                    .map(|&c| BigRat::from_integer(BigInt::from(c)))
                    .collect(),
            )
        };
        QRat::new(to_poly(num), to_poly(den)).unwrap()
    }

    #[test]
    fn residue_31_at_k1_is_psi_times_binomial() {
        // k=1, l=0: (1 - x2/y) psi(y, x2)
        let psi = LaurentPoly::monomial(2, vec![2, 1], QRat::one());
        let got = residue_31(0, 1, &psi);
        let want = psi.mul_binomial(&QRat::one(), &[-1, 1]);
        assert_eq!(got, want);
        assert!(residue_31(0, 2, &LaurentPoly::zero(2)).is_zero());
    }

    #[test]
    fn residue_31_matches_series_expansion() {
        for k in 1..=3 {
            let r = verify_31(k, 2);
            assert!(r.pass(), "k={k}: {:?}", r.failures);
            assert_eq!(r.cases_checked, k * 9);
        }
    }

    #[test]
    fn residue_31_k2_l1_constant_psi() {
        // denominator constant (q^{-1};q)_1 (q;q)_0 = 1 - q^{-1}
        let psi = LaurentPoly::one(2);
        let closed = residue_31(1, 2, &psi);
        let mut with_factor = closed.embed(3, &[2, 1]);
        for s in 0..2 {
            with_factor = with_factor.mul_binomial(&QRat::q_pow(s), &[0, -1, 1]);
        }
        assert_eq!(with_factor, residue_31_by_series(1, 2, &psi));
        assert_eq!(
            pole_constant(1, 2),
            QRat::one().sub(&QRat::q_pow(-1))
        );
    }

    #[test]
    fn iterated_residue_single_variable() {
        let y = YSample::from_integers(&[5]);
        let psi = LaurentPoly::var(1, 0);
        let pt = ResiduePoint::diagonal(vec![0]);
        let got = iterated_residue(&pt, &y, &psi, 1, 1, 1).unwrap();
        assert_eq!(got, QRat::from_int(5));
        // k=2: summing over l gives y (1+q)
        let mut total = QRat::zero();
        for l in 0..2 {
            let pt = ResiduePoint::diagonal(vec![l]);
            total = total.add(&iterated_residue(&pt, &y, &psi, 1, 1, 2).unwrap());
        }
        assert_eq!(total, QRat::from_int(5).mul(&qr(&[1, 1], &[1])));
    }

    #[test]
    fn iterated_residue_matches_sequential_series() {
        let psis = [
            LaurentPoly::one(2),
            LaurentPoly::var(2, 0),
            LaurentPoly::monomial(2, vec![1, 1], QRat::one())
                .add(&LaurentPoly::monomial(2, vec![2, 0], qr(&[0, 1], &[1]))),
        ];
        let y = YSample::from_integers(&[2, 3]);
        for k in 1..=2 {
            for psi in &psis {
                for assignment in [vec![0, 1], vec![1, 0]] {
                    for l1 in 0..k {
                        for l2 in 0..k {
                            let pt = ResiduePoint::new(assignment.clone(), vec![l1, l2]);
                            let closed = iterated_residue(&pt, &y, psi, 2, 2, k).unwrap();
                            let series =
                                iterated_residue_by_series(&pt, &y, psi, 2, 2, k).unwrap();
                            assert_eq!(closed, series, "k={k} pt={pt:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn iterated_residue_with_spare_y_values() {
        // m > n: unmatched kernel factors over the unused y stay in place
        let y = YSample::from_integers(&[2, 3, 5]);
        let psi = LaurentPoly::one(1);
        let pt = ResiduePoint::new(vec![1], vec![0]);
        let closed = iterated_residue(&pt, &y, &psi, 1, 3, 2).unwrap();
        let series = iterated_residue_by_series(&pt, &y, &psi, 1, 3, 2).unwrap();
        assert_eq!(closed, series);
    }

    #[test]
    fn single_var_sum_examples() {
        for p in [0, 3, 7] {
            let (t, c) = single_var_residue_sum(p, 1);
            assert!(t.is_one());
            assert!(c.is_one());
        }
        let (t, c) = single_var_residue_sum(0, 2);
        assert!(t.is_one());
        assert!(c.is_one());
        let (t, c) = single_var_residue_sum(1, 2);
        assert_eq!(t, qr(&[1, 1], &[1]));
        assert_eq!(c, qr(&[1, 1], &[1]));
    }

    #[test]
    fn single_var_sum_paths_agree() {
        let r = verify_residue_sums(10, 4);
        assert!(r.pass(), "failures: {:?}", r.failures);
        assert_eq!(r.cases_checked, 44);
    }

    #[test]
    fn genericity_examples() {
        let pt = ResiduePoint::diagonal(vec![0, 0]);
        assert!(genericity_check(&pt, &YSample::from_integers(&[2, 3]), 2, 2, 2).is_ok());
        assert!(genericity_check(&pt, &YSample::from_integers(&[2, 2]), 2, 2, 2).is_err());
        assert!(genericity_check(&pt, &YSample::from_integers(&[0, 3]), 2, 2, 2).is_err());
        // equal up to a power of q: y_2 = y_1 q^0 is the only reachable case
        // with integers, but rational samples can collide across q-shifts
        let bad = YSample::new(vec![
            BigRat::from_integer(BigInt::from(2)),
            BigRat::from_integer(BigInt::from(2)),
        ]);
        assert!(matches!(
            genericity_check(&pt, &bad, 2, 2, 2),
            Err(ResidueError::NonGenericSample(_))
        ));
    }

    #[test]
    fn residue_sum_33_small_cases() {
        // lambda = 0, n = 2, k = 1: single point, everything collapses to 1
        let mut basis = MacdonaldBasis::new(2, 1);
        let y = YSample::from_integers(&[2, 3]);
        let got = residue_sum_33(&Partition::empty(2), 2, 1, &y, &mut basis).unwrap();
        assert!(got.is_one());
        // lambda = 0, n = 1, k = 2
        let mut basis = MacdonaldBasis::new(1, 2);
        let y = YSample::from_integers(&[7]);
        let got = residue_sum_33(&Partition::empty(1), 1, 2, &y, &mut basis).unwrap();
        assert!(got.is_one());
    }

    #[test]
    fn residue_sum_33_matches_norm_side() {
        let mut basis = MacdonaldBasis::new(2, 2);
        let lambda = Partition::new(&[1], 2);
        let y = YSample::from_integers(&[2, 3]);
        let lhs = residue_sum_33(&lambda, 2, 2, &y, &mut basis).unwrap();
        let p1 = basis.polynomial(&lambda);
        let rhs = b_lambda_armleg(&lambda, 2)
            .mul(&p1.eval(&[QRat::from_int(2), QRat::from_int(3)]))
            .mul(&norm_formula(&lambda, 2, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_sum_collapses_to_diagonal() {
        let mut basis = MacdonaldBasis::new(2, 1);
        let lambda = Partition::new(&[1], 2);
        let y = YSample::from_integers(&[2, 5]);
        let diag = residue_sum_33(&lambda, 2, 1, &y, &mut basis).unwrap();
        let full = residue_sum_33_sigma(&lambda, 2, 1, &y, &mut basis).unwrap();
        assert_eq!(diag, full);
    }

    #[test]
    fn verify_33_small_sweep() {
        let mut basis = MacdonaldBasis::new(1, 3);
        let r = verify_33(&Partition::empty(1), 1, 3, 2, 11, &mut basis);
        assert!(r.pass());
        let mut basis = MacdonaldBasis::new(2, 2);
        for parts in [vec![1], vec![2, 1]] {
            let lambda = Partition::new(&parts, 2);
            let r = verify_33(&lambda, 2, 2, 3, 42, &mut basis);
            assert!(r.pass(), "lambda={lambda}");
            assert_eq!(r.samples.len(), 3);
        }
    }

    #[test]
    fn verify_33_report_shape() {
        let mut basis = MacdonaldBasis::new(2, 1);
        let r = verify_33(&Partition::new(&[1], 2), 2, 1, 1, 7, &mut basis);
        let v = r.to_json();
        assert_eq!(v["identity"], "eq33");
        assert_eq!(v["lambda"], serde_json::json!([1, 0]));
        assert_eq!(v["n"], 2);
        assert_eq!(v["k"], 1);
        assert!(v["pass"].as_bool().unwrap());
        let samples = v["samples"].as_array().unwrap();
        assert_eq!(samples.len(), 1);
        assert!(samples[0]["pass"].as_bool().unwrap());
        assert!(samples[0]["y"].as_array().unwrap()[0].is_string());
    }

    #[test]
    fn lemma_n1_examples() {
        let one = LaurentPoly::one(1);
        let r = verify_lemma_n1(&one, 1);
        assert!(r.pass());
        assert_eq!(r.lhs, one);
        let x = LaurentPoly::var(1, 0);
        let r = verify_lemma_n1(&x, 2);
        assert!(r.pass());
        assert_eq!(r.lhs, x.scalar_mul(&qr(&[1, 1], &[1])));
        let x2 = LaurentPoly::monomial(1, vec![2], QRat::one());
        let r = verify_lemma_n1(&x2, 2);
        assert!(r.pass());
        assert_eq!(r.lhs, x2.scalar_mul(&qr(&[1, 1, 1], &[1])));
    }

    #[test]
    fn lemma_n1_sweep() {
        for k in 1..=3 {
            for d in 0..=3 {
                let psi = LaurentPoly::monomial(1, vec![d], QRat::one());
                assert!(verify_lemma_n1(&psi, k).pass(), "k={k} d={d}");
            }
            // a non-monomial combination
            let psi = LaurentPoly::monomial(1, vec![3], qr(&[0, 2], &[1]))
                .add(&LaurentPoly::var(1, 0))
                .add(&LaurentPoly::constant(1, qr(&[5], &[3])));
            assert!(verify_lemma_n1(&psi, k).pass(), "k={k} combined");
        }
    }

    #[test]
    fn sample_draws_are_generic_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let a = YSample::sample(4, &mut rng);
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let b = YSample::sample(4, &mut rng);
        assert_eq!(a, b);
        let vals = a.values();
        for (i, v) in vals.iter().enumerate() {
            assert!(!v.is_zero());
            assert!(!vals[..i].contains(v));
        }
    }
}
