//! Sparse multivariate Laurent polynomials over Q(q), and the machinery the
//! inner product is built from: the bar involution, constant-term extraction,
//! monomial symmetric polynomials, the weight
//!
//! Delta(x) = prod_{1 <= i != j <= n} (x_i/x_j; q)_k,
//!
//! and <f, g> = (1/n!) [f bar(g) Delta]_1. The torus integral behind that
//! bracket is read algebraically as constant-term extraction; every integrand
//! handled here is a Laurent polynomial, so convergence never comes up.
//!
//! Terms live in a hash map keyed by exponent vector. The hasher is the
//! default SipHash with fixed keys, so iteration is reproducible run to run;
//! a graded-lex order is only materialized on serialization and display.

use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::HashMap;
use std::fmt;
use std::hash::BuildHasherDefault;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::partitions::Partition;
use crate::qfield::{gauss_binomial, BigRat, QFieldError, QPoly, QRat};

/// Exponent vector: one signed entry per variable.
pub type ExpVec = Vec<i64>;

type TermMap = HashMap<ExpVec, QRat, BuildHasherDefault<DefaultHasher>>;

/// Sparse Laurent polynomial in a fixed number of variables. No zero
/// coefficients are stored, and every key has length `n_vars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    n_vars: usize,
    terms: TermMap,
}

impl LaurentPoly {
    pub fn zero(n_vars: usize) -> LaurentPoly {
        LaurentPoly {
            n_vars,
            terms: TermMap::default(),
        }
    }

    pub fn one(n_vars: usize) -> LaurentPoly {
        LaurentPoly::constant(n_vars, QRat::one())
    }

    pub fn constant(n_vars: usize, c: QRat) -> LaurentPoly {
        let mut p = LaurentPoly::zero(n_vars);
        p.insert_add(vec![0; n_vars], c);
        p
    }

    /// The variable x_{var+1} (0-indexed argument).
    pub fn var(n_vars: usize, var: usize) -> LaurentPoly {
        assert!(var < n_vars, "variable index out of range");
        let mut e = vec![0; n_vars];
        e[var] = 1;
        LaurentPoly::monomial(n_vars, e, QRat::one())
    }

    pub fn monomial(n_vars: usize, exp: ExpVec, c: QRat) -> LaurentPoly {
        assert_eq!(exp.len(), n_vars, "exponent vector length mismatch");
        let mut p = LaurentPoly::zero(n_vars);
        p.insert_add(exp, c);
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &QRat)> {
        self.terms.iter()
    }

    /// Terms sorted by (total degree, exponent vector) ascending; the
    /// canonical order for serialization and display.
    pub fn sorted_terms(&self) -> Vec<(&ExpVec, &QRat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| (e.iter().sum::<i64>(), (*e).clone()));
        v
    }

    pub fn coeff(&self, exp: &[i64]) -> QRat {
        self.terms.get(exp).cloned().unwrap_or_else(QRat::zero)
    }

    fn insert_add(&mut self, exp: ExpVec, c: QRat) {
        debug_assert_eq!(exp.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.n_vars);
        out.terms.reserve(self.terms.len().max(other.terms.len()));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: ExpVec = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &QRat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.n_vars);
        }
        LaurentPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// Multiply by the binomial (1 - c * x^exp) without building it first.
    pub fn mul_binomial(&self, c: &QRat, exp: &[i64]) -> LaurentPoly {
        assert_eq!(exp.len(), self.n_vars, "exponent vector length mismatch");
        let mut out = self.clone();
        for (e, a) in &self.terms {
            let shifted: ExpVec = e.iter().zip(exp).map(|(x, d)| x + d).collect();
            out.insert_add(shifted, a.mul(c).neg());
        }
        out
    }

    /// Multiply by the monomial c * x^exp.
    pub fn mul_monomial(&self, c: &QRat, exp: &[i64]) -> LaurentPoly {
        assert_eq!(exp.len(), self.n_vars, "exponent vector length mismatch");
        if c.is_zero() {
            return LaurentPoly::zero(self.n_vars);
        }
        LaurentPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| {
                    let shifted: ExpVec = e.iter().zip(exp).map(|(x, d)| x + d).collect();
                    (shifted, a.mul(c))
                })
                .collect(),
        }
    }

    /// Exact division by the binomial (1 - c * x^exp), with `exp` nonzero.
    /// Returns None when the division leaves a remainder. The quotient is
    /// rebuilt monomial by monomial along increasing exp-direction and then
    /// checked by multiplying back.
    pub fn div_exact_binomial(&self, c: &QRat, exp: &[i64]) -> Option<LaurentPoly> {
        assert_eq!(exp.len(), self.n_vars, "exponent vector length mismatch");
        assert!(exp.iter().any(|&d| d != 0), "division by 1 - c needs a scalar path");
        if self.is_zero() {
            return Some(LaurentPoly::zero(self.n_vars));
        }
        // phi(v) = v . exp is strictly increased by adding exp, so quotient
        // terms can be solved for in increasing phi order:
        // g[v] = f[v] + c * g[v - exp].
        let phi = |v: &[i64]| -> i64 { v.iter().zip(exp).map(|(a, b)| a * b).sum() };
        let phi_step = phi(exp);
        let phi_max = self.terms.keys().map(|e| phi(e)).max().unwrap() - phi_step;
        let mut queue: std::collections::BTreeSet<(i64, ExpVec)> = self
            .terms
            .keys()
            .filter(|e| phi(e) <= phi_max)
            .map(|e| (phi(e), e.clone()))
            .collect();
        let mut g = LaurentPoly::zero(self.n_vars);
        while let Some((p, v)) = queue.pop_first() {
            let below: ExpVec = v.iter().zip(exp).map(|(a, b)| a - b).collect();
            let coeff = self.coeff(&v).add(&c.mul(&g.coeff(&below)));
            if coeff.is_zero() {
                continue;
            }
            if p + phi_step <= phi_max {
                let above: ExpVec = v.iter().zip(exp).map(|(a, b)| a + b).collect();
                queue.insert((p + phi_step, above));
            }
            g.terms.insert(v, coeff);
        }
        if g.mul_binomial(c, exp) == *self {
            Some(g)
        } else {
            None
        }
    }

    /// Negate every exponent vector: the involution f -> bar(f).
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// [f]_1, the coefficient of the zero exponent vector.
    pub fn constant_term(&self) -> QRat {
        self.coeff(&vec![0; self.n_vars])
    }

    /// Total degree when every term has the same exponent sum; None otherwise
    /// or for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Substitute x_var -> c * x_var.
    pub fn scale_var(&self, var: usize, c: &QRat) -> LaurentPoly {
        assert!(var < self.n_vars, "variable index out of range");
        LaurentPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.mul(&c.pow(e[var]))))
                .collect(),
        }
    }

    /// Substitute x_var -> p. Every exponent of x_var must be non-negative.
    pub fn subst_var_poly(&self, var: usize, p: &LaurentPoly) -> LaurentPoly {
        assert!(var < self.n_vars, "variable index out of range");
        assert_eq!(self.n_vars, p.n_vars, "variable count mismatch");
        let mut powers: Vec<LaurentPoly> = vec![LaurentPoly::one(self.n_vars)];
        let mut out = LaurentPoly::zero(self.n_vars);
        for (e, c) in &self.terms {
            let d = e[var];
            assert!(d >= 0, "substitution into a negative power");
            while powers.len() <= d as usize {
                powers.push(powers.last().unwrap().mul(p));
            }
            let mut rest = e.clone();
            rest[var] = 0;
            for (pe, pc) in &powers[d as usize].terms {
                let combined: ExpVec = rest.iter().zip(pe).map(|(a, b)| a + b).collect();
                out.insert_add(combined, c.mul(pc));
            }
        }
        out
    }

    /// Coefficient of x_var^e, as a Laurent polynomial in the remaining
    /// variables (the extracted slot is zeroed, not removed).
    pub fn coeff_of_var(&self, var: usize, e: i64) -> LaurentPoly {
        assert!(var < self.n_vars, "variable index out of range");
        let mut out = LaurentPoly::zero(self.n_vars);
        for (exp, c) in &self.terms {
            if exp[var] == e {
                let mut rest = exp.clone();
                rest[var] = 0;
                out.insert_add(rest, c.clone());
            }
        }
        out
    }

    /// Smallest exponent of x_var over all terms; None for the zero polynomial.
    pub fn min_exp(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn max_exp(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Reindex into a wider variable context: old variable i becomes
    /// variable `map[i]` of an `n_vars`-variable polynomial.
    pub fn embed(&self, n_vars: usize, map: &[usize]) -> LaurentPoly {
        assert_eq!(map.len(), self.n_vars, "embedding map length mismatch");
        assert!(map.iter().all(|&m| m < n_vars), "embedding map out of range");
        let mut out = LaurentPoly::zero(n_vars);
        for (e, c) in &self.terms {
            let mut exp = vec![0i64; n_vars];
            for (i, &x) in e.iter().enumerate() {
                exp[map[i]] += x;
            }
            out.insert_add(exp, c.clone());
        }
        out
    }

    /// Exact evaluation at a point with nonzero coordinates wherever a
    /// negative exponent occurs.
    pub fn eval(&self, point: &[QRat]) -> QRat {
        assert_eq!(point.len(), self.n_vars, "evaluation point length mismatch");
        let mut acc = QRat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &d) in point.iter().zip(e) {
                if d != 0 {
                    term = term.mul(&x.pow(d));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Largest denominator-clearing factor: returns (D * self, D) where D is
    /// the least common multiple of all coefficient denominators, so the
    /// scaled polynomial has purely polynomial coefficients. Multiplication
    /// chains on the scaled value then never reduce fractions.
    pub fn clear_denominators(&self) -> (LaurentPoly, QPoly) {
        let mut d = QPoly::one();
        for c in self.terms.values() {
            if c.den().is_one() {
                continue;
            }
            let g = QPoly::gcd(&d, c.den());
            d = d.mul(&c.den().exact_div(&g));
        }
        if d.is_one() {
            return (self.clone(), d);
        }
        let scaled = LaurentPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let cofactor = d.exact_div(c.den());
                    (e.clone(), QRat::from_qpoly(c.num().mul(&cofactor)))
                })
                .collect(),
        };
        (scaled, d)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| json!({ "e": e, "c": c.to_json() }))
            .collect();
        json!({ "n": self.n_vars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<LaurentPoly, QFieldError> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| QFieldError::Malformed("missing \"n\"".into()))? as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| QFieldError::Malformed("missing \"terms\" array".into()))?;
        let mut out = LaurentPoly::zero(n);
        for t in terms {
            let e: ExpVec = t
                .get("e")
                .and_then(Value::as_array)
                .ok_or_else(|| QFieldError::Malformed("term missing \"e\"".into()))?
                .iter()
                .map(|x| x.as_i64())
                .collect::<Option<_>>()
                .ok_or_else(|| QFieldError::Malformed("bad exponent".into()))?;
            if e.len() != n {
                return Err(QFieldError::Malformed("exponent length mismatch".into()));
            }
            let c = QRat::from_json(
                t.get("c")
                    .ok_or_else(|| QFieldError::Malformed("term missing \"c\"".into()))?,
            )?;
            out.insert_add(e, c);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != 0)
                .map(|(i, &d)| {
                    if d == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, d)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "({c})*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// m_lambda(x_1..x_n): the sum of all distinct permutations of the exponent
/// vector (lambda_1, ..., lambda_n).
pub fn monomial_symmetric(lambda: &Partition, n: usize) -> LaurentPoly {
    assert!(
        lambda.len() <= n,
        "partition {lambda} does not fit in {n} variables"
    );
    let mut exps = lambda.parts().to_vec();
    exps.resize(n, 0);
    let mut out = LaurentPoly::zero(n);
    // multiset permutations in decreasing lex order
    fn go(remaining: &mut Vec<usize>, current: &mut Vec<i64>, out: &mut Vec<ExpVec>) {
        if remaining.is_empty() {
            out.push(current.clone());
            return;
        }
        let mut last: Option<usize> = None;
        for i in 0..remaining.len() {
            if last == Some(remaining[i]) {
                continue;
            }
            last = Some(remaining[i]);
            let v = remaining.remove(i);
            current.push(v as i64);
            go(remaining, current, out);
            current.pop();
            remaining.insert(i, v);
        }
    }
    let mut perms = Vec::new();
    go(&mut exps, &mut Vec::new(), &mut perms);
    for e in perms {
        out.insert_add(e, QRat::one());
    }
    out
}

/// The weight Delta(x) = prod_{1 <= i != j <= n} (x_i/x_j; q)_k, expanded.
/// Every term has exponent sum zero; this homogeneity is asserted.
pub fn delta_weight(n: usize, k: usize) -> LaurentPoly {
    assert!(n >= 1 && k >= 1, "delta_weight needs n >= 1 and k >= 1");
    let mut delta = LaurentPoly::one(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut e = vec![0i64; n];
            e[i] = 1;
            e[j] = -1;
            for s in 0..k {
                delta = delta.mul_binomial(&QRat::q_pow(s as i64), &e);
            }
        }
    }
    assert_eq!(delta.homogeneous_degree(), Some(0));
    delta
}

fn factorial(n: usize) -> QRat {
    let mut f = BigInt::from(1);
    for i in 2..=n {
        f *= i;
    }
    QRat::from_bigrat(BigRat::from_integer(f))
}

/// <f, g> = (1/n!) [f bar(g) Delta]_1 with Delta = delta_weight(n, k).
pub fn inner_product(f: &LaurentPoly, g: &LaurentPoly, n: usize, k: usize) -> QRat {
    assert_eq!(f.n_vars(), n, "f has the wrong variable count");
    assert_eq!(g.n_vars(), n, "g has the wrong variable count");
    inner_product_with_delta(f, g, &delta_weight(n, k))
}

/// Same as [`inner_product`] but reusing an already-expanded Delta.
pub fn inner_product_with_delta(f: &LaurentPoly, g: &LaurentPoly, delta: &LaurentPoly) -> QRat {
    let n = delta.n_vars();
    assert_eq!(f.n_vars(), n, "f has the wrong variable count");
    assert_eq!(g.n_vars(), n, "g has the wrong variable count");
    if f.is_zero() || g.is_zero() {
        return QRat::zero();
    }
    // homogeneous pieces of distinct degree pair to zero: Delta is
    // homogeneous of degree 0, so no product term can reach exponent 0
    if let (Some(df), Some(dg)) = (f.homogeneous_degree(), g.homogeneous_degree()) {
        if df != dg {
            return QRat::zero();
        }
    }
    // clear denominators so the triple product runs on polynomial scalars
    let (fc, df) = f.clear_denominators();
    let (gc, dg) = g.clear_denominators();
    let ct = fc.mul(&gc.bar()).mul(delta).constant_term();
    let scale = QRat::from_qpoly(df.mul(&dg)).mul(&factorial(n));
    ct.div(&scale)
}

/// Truncated power series in the y-variables over Laurent polynomials in the
/// x-variables: the x-block comes first (indices 0..n_x), then the y-block.
/// Every stored term has non-negative y-exponents with total y-degree at most
/// the cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiSeries {
    poly: LaurentPoly,
    n_x: usize,
    n_y: usize,
    cap: usize,
}

impl BiSeries {
    pub fn new(poly: LaurentPoly, n_x: usize, n_y: usize, cap: usize) -> BiSeries {
        assert_eq!(poly.n_vars(), n_x + n_y, "variable count mismatch");
        let mut s = BiSeries { poly, n_x, n_y, cap };
        s.truncate();
        s
    }

    fn y_degree(&self, e: &[i64]) -> i64 {
        e[self.n_x..].iter().sum()
    }

    fn truncate(&mut self) {
        let n_x = self.n_x;
        let cap = self.cap as i64;
        self.poly
            .terms
            .retain(|e, _| e[n_x..].iter().all(|&d| d >= 0) && e[n_x..].iter().sum::<i64>() <= cap);
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Multiply by a polynomial with non-negative y-exponents, re-truncating.
    pub fn mul_poly(&self, p: &LaurentPoly) -> BiSeries {
        let mut out = BiSeries {
            poly: LaurentPoly::zero(self.poly.n_vars()),
            n_x: self.n_x,
            n_y: self.n_y,
            cap: self.cap,
        };
        let cap = self.cap as i64;
        for (ea, ca) in &self.poly.terms {
            for (eb, cb) in &p.terms {
                let e: ExpVec = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if out.y_degree(&e) > cap {
                    continue;
                }
                out.poly.insert_add(e, ca.mul(cb));
            }
        }
        out
    }

    /// The part of total y-degree exactly d.
    pub fn y_graded_piece(&self, d: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.poly.n_vars());
        for (e, c) in &self.poly.terms {
            if self.y_degree(e) == d {
                out.insert_add(e.clone(), c.clone());
            }
        }
        out
    }
}

/// Truncation of the kernel prod_{i <= m, j <= n} 1/(y_i x_j; q)_k to total
/// y-degree at most `cap`, using the expansion
/// 1/(u; q)_k = sum_{r >= 0} [r+k-1 choose r]_q u^r.
/// Variables: x_1..x_n first, then y_1..y_m.
pub fn kernel_truncated(m: usize, n: usize, k: usize, cap: usize) -> BiSeries {
    assert!(k >= 1, "k must be a positive integer");
    let total = n + m;
    let mut acc = BiSeries::new(LaurentPoly::one(total), n, m, cap);
    for i in 0..m {
        for j in 0..n {
            let mut factor = LaurentPoly::zero(total);
            for r in 0..=cap {
                let mut e = vec![0i64; total];
                e[j] = r as i64;
                e[n + i] = r as i64;
                factor.insert_add(e, gauss_binomial(r + k - 1, r));
            }
            acc = acc.mul_poly(&factor);
        }
    }
    acc
}

/// prod_{i <= m, j <= n} (y_i x_j; q)_k as a plain polynomial in the combined
/// variables; the reciprocal of what [`kernel_truncated`] expands.
pub fn kernel_denominator(m: usize, n: usize, k: usize) -> LaurentPoly {
    let total = n + m;
    let mut out = LaurentPoly::one(total);
    for i in 0..m {
        for j in 0..n {
            let mut e = vec![0i64; total];
            e[j] = 1;
            e[n + i] = 1;
            for s in 0..k {
                out = out.mul_binomial(&QRat::q_pow(s as i64), &e);
            }
        }
    }
    out
}
