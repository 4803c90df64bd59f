//! The Macdonald basis P_lambda at t = q^k, built by Gram-Schmidt against
//! dominance order, plus the verification routines for its defining
//! properties: orthogonality, the constant-term norm, and the Cauchy kernel
//! expansion.
//!
//! P_lambda is characterized by two conditions: it expands as m_lambda plus a
//! combination of m_mu for mu strictly dominance-below lambda, and it is
//! orthogonal to every other P_mu. The construction here subtracts the
//! projection onto each strictly dominated P_mu:
//!
//! P_lambda = m_lambda - sum_{mu < lambda} (<m_lambda, P_mu> / <P_mu, P_mu>) P_mu.
//!
//! Only same-weight partitions interact (the inner product pairs distinct
//! homogeneous degrees to zero), so each weight class is self-contained.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::partitions::{
    b_lambda_armleg, dominance_lt, enumerate_partitions, Partition,
};
use crate::qfield::QRat;
use crate::symlaurent::{
    delta_weight, inner_product_with_delta, kernel_truncated, monomial_symmetric, LaurentPoly,
};

/// Bump when the on-disk cache layout changes; the version is part of the
/// file name, so old caches are simply never read.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Computed P_lambda and norms for one (n, k) context, with the expanded
/// weight Delta(n, k) kept alongside since every inner product reuses it.
#[derive(Clone, Debug)]
pub struct MacdonaldBasis {
    n: usize,
    k: usize,
    delta: LaurentPoly,
    table: BTreeMap<Vec<usize>, LaurentPoly>,
    norms: BTreeMap<Vec<usize>, QRat>,
}

impl MacdonaldBasis {
    pub fn new(n: usize, k: usize) -> MacdonaldBasis {
        assert!(n >= 1 && k >= 1, "need n >= 1 and k >= 1");
        MacdonaldBasis {
            n,
            k,
            delta: delta_weight(n, k),
            table: BTreeMap::new(),
            norms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> &LaurentPoly {
        &self.delta
    }

    /// <f, g> against this context's cached Delta.
    pub fn inner(&self, f: &LaurentPoly, g: &LaurentPoly) -> QRat {
        inner_product_with_delta(f, g, &self.delta)
    }

    /// P_lambda, computing and caching it (and its dominance-predecessors)
    /// on first use.
    pub fn polynomial(&mut self, lambda: &Partition) -> LaurentPoly {
        assert!(
            lambda.len() <= self.n,
            "partition {lambda} does not fit in {} variables",
            self.n
        );
        let key = lambda.parts().to_vec();
        if let Some(p) = self.table.get(&key) {
            return p.clone();
        }
        let mut p = monomial_symmetric(lambda, self.n);
        let m_lambda = p.clone();
        for mu in enumerate_partitions(lambda.weight(), self.n) {
            if !dominance_lt(&mu, lambda) {
                continue;
            }
            let p_mu = self.polynomial(&mu);
            let num = self.inner(&m_lambda, &p_mu);
            if num.is_zero() {
                continue;
            }
            let den = self.norm(&mu);
            let coeff = num.div(&den);
            p = p.sub(&p_mu.scalar_mul(&coeff));
        }
        self.table.insert(key, p.clone());
        p
    }

    /// <P_lambda, P_lambda> computed from the constant term, cached.
    /// A zero norm would make Gram-Schmidt impossible; it cannot occur at
    /// t = q^k and is treated as an internal bug.
    pub fn norm(&mut self, lambda: &Partition) -> QRat {
        let key = lambda.parts().to_vec();
        if let Some(v) = self.norms.get(&key) {
            return v.clone();
        }
        let p = self.polynomial(lambda);
        let v = self.inner(&p, &p);
        assert!(!v.is_zero(), "degenerate Gram matrix: <P_{lambda}, P_{lambda}> = 0");
        self.norms.insert(key, v.clone());
        v
    }

    /// Partitions whose polynomial has been computed, in key order.
    pub fn computed(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.table.keys()
    }

    /// File name the cache for this context is stored under.
    pub fn cache_file_name(n: usize, k: usize) -> String {
        format!("macdonald-basis-n{n}-k{k}-v{CACHE_FORMAT_VERSION}.json")
    }

    /// Persist the computed table to `dir` atomically (temp file + rename).
    pub fn save_cache(&self, dir: &Path) -> io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let mut entries = Map::new();
        for (key, p) in &self.table {
            let name = key
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let norm = match self.norms.get(key) {
                Some(v) => v.to_json(),
                None => Value::Null,
            };
            entries.insert(name, json!({ "p": p.to_json(), "norm": norm }));
        }
        let doc = json!({
            "version": CACHE_FORMAT_VERSION,
            "n": self.n,
            "k": self.k,
            "entries": Value::Object(entries),
        });
        let path = dir.join(Self::cache_file_name(self.n, self.k));
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(&doc)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Load a previously saved cache; Ok(None) when no file exists.
    /// A file that parses but does not match (n, k, version) or fails a
    /// monicity spot-check is rejected as corrupt.
    pub fn load_cache(dir: &Path, n: usize, k: usize) -> io::Result<Option<MacdonaldBasis>> {
        let path = dir.join(Self::cache_file_name(n, k));
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let corrupt = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {msg}", path.display()));
        let doc: Value =
            serde_json::from_slice(&bytes).map_err(|e| corrupt(&e.to_string()))?;
        if doc.get("version").and_then(Value::as_u64) != Some(CACHE_FORMAT_VERSION as u64)
            || doc.get("n").and_then(Value::as_u64) != Some(n as u64)
            || doc.get("k").and_then(Value::as_u64) != Some(k as u64)
        {
            return Err(corrupt("header does not match file name"));
        }
        let mut basis = MacdonaldBasis::new(n, k);
        let entries = doc
            .get("entries")
            .and_then(Value::as_object)
            .ok_or_else(|| corrupt("missing entries"))?;
        for (name, entry) in entries {
            let parts: Vec<usize> = if name.is_empty() {
                Vec::new()
            } else {
                name.split(',')
                    .map(|s| s.parse().map_err(|_| corrupt("bad partition key")))
                    .collect::<Result<_, _>>()?
            };
            let lambda = Partition::new(&parts, n);
            let p = LaurentPoly::from_json(entry.get("p").ok_or_else(|| corrupt("missing p"))?)
                .map_err(|e| corrupt(&e.to_string()))?;
            let mut leading = lambda.padded().iter().map(|&x| x as i64).collect::<Vec<_>>();
            leading.resize(n, 0);
            if !p.coeff(&leading).is_one() {
                return Err(corrupt("cached polynomial is not monic"));
            }
            match entry.get("norm") {
                Some(Value::Null) | None => {}
                Some(v) => {
                    let norm = QRat::from_json(v).map_err(|e| corrupt(&e.to_string()))?;
                    basis.norms.insert(parts.clone(), norm);
                }
            }
            basis.table.insert(parts, p);
        }
        Ok(Some(basis))
    }
}

/// P_lambda in n variables at t = q^k, through the shared cache.
pub fn macdonald_p(
    lambda: &Partition,
    n: usize,
    k: usize,
    cache: &mut MacdonaldBasis,
) -> LaurentPoly {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    cache.polynomial(lambda)
}

/// <P_lambda, P_lambda> from the constant-term inner product.
pub fn norm_via_ct(lambda: &Partition, n: usize, k: usize, cache: &mut MacdonaldBasis) -> QRat {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    cache.norm(lambda)
}

/// Expansion of a symmetric polynomial over monomial symmetric functions:
/// the coefficient of m_mu is the coefficient of the descending monomial
/// x^mu. Returns None when the input is not symmetric (the expansion does
/// not reproduce it).
pub fn monomial_expansion(p: &LaurentPoly, n: usize) -> Option<Vec<(Partition, QRat)>> {
    let mut out = Vec::new();
    let mut rebuilt = LaurentPoly::zero(n);
    for (e, c) in p.sorted_terms() {
        if e.iter().any(|&d| d < 0) {
            return None;
        }
        let descending = e.windows(2).all(|w| w[0] >= w[1]);
        if !descending {
            continue;
        }
        let parts: Vec<usize> = e.iter().take_while(|&&d| d > 0).map(|&d| d as usize).collect();
        let mu = Partition::new(&parts, n);
        rebuilt = rebuilt.add(&monomial_symmetric(&mu, n).scalar_mul(c));
        out.push((mu, c.clone()));
    }
    (&rebuilt == p).then_some(out)
}

/// One orthogonality violation: a pair with a nonzero inner product.
#[derive(Clone, Debug)]
pub struct OrthogonalityViolation {
    pub lambda: Partition,
    pub mu: Partition,
    pub value: QRat,
}

#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub weight: usize,
    pub n: usize,
    pub k: usize,
    pub pairs_checked: usize,
    pub violations: Vec<OrthogonalityViolation>,
}

impl OrthogonalityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check <P_lambda, P_mu> = 0 for all pairs lambda != mu of the given weight
/// with length <= n. Violations are reported, not thrown.
pub fn verify_orthogonality(
    weight: usize,
    n: usize,
    k: usize,
    cache: &mut MacdonaldBasis,
) -> OrthogonalityReport {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    let class = enumerate_partitions(weight, n);
    let mut report = OrthogonalityReport {
        weight,
        n,
        k,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for (i, lambda) in class.iter().enumerate() {
        for mu in &class[i + 1..] {
            let p_lambda = cache.polynomial(lambda);
            let p_mu = cache.polynomial(mu);
            let value = cache.inner(&p_lambda, &p_mu);
            report.pairs_checked += 1;
            if !value.is_zero() {
                report.violations.push(OrthogonalityViolation {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                    value,
                });
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct CauchyReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub cap: usize,
    pub lambda_count: usize,
    pub mismatched_terms: usize,
}

impl CauchyReport {
    pub fn pass(&self) -> bool {
        self.mismatched_terms == 0
    }
}

/// Check the kernel expansion: through total y-degree `cap`,
///
/// prod_{i <= m, j <= n} 1/(y_i x_j; q)_k = sum_lambda b_lambda P_lambda(y) P_lambda(x),
///
/// the sum running over partitions with |lambda| <= cap and l(lambda) <=
/// min(m, n). The x-side uses `cache`; a separate m-variable basis is built
/// when m differs from n.
pub fn verify_cauchy(
    m: usize,
    n: usize,
    k: usize,
    cap: usize,
    cache: &mut MacdonaldBasis,
) -> CauchyReport {
    assert_eq!((cache.n(), cache.k()), (n, k), "cache context mismatch");
    let total = n + m;
    let x_map: Vec<usize> = (0..n).collect();
    let y_map: Vec<usize> = (n..total).collect();
    let mut y_basis = if m == n { None } else { Some(MacdonaldBasis::new(m, k)) };
    let mut sum = LaurentPoly::zero(total);
    let mut lambda_count = 0;
    for w in 0..=cap {
        for lambda in enumerate_partitions(w, m.min(n)) {
            let p_x = cache.polynomial(&lambda.with_slots(n));
            let p_y = match y_basis.as_mut() {
                Some(b) => b.polynomial(&lambda.with_slots(m)),
                None => p_x.clone(),
            };
            let b = b_lambda_armleg(&lambda, k);
            let term = p_x
                .embed(total, &x_map)
                .mul(&p_y.embed(total, &y_map))
                .scalar_mul(&b);
            sum = sum.add(&term);
            lambda_count += 1;
        }
    }
    let kernel = kernel_truncated(m, n, k, cap);
    let diff = kernel.poly().sub(&sum);
    CauchyReport {
        m,
        n,
        k,
        cap,
        lambda_count,
        mismatched_terms: diff.num_terms(),
    }
}

/// Rebuild P_lambda by Gram-Schmidt over a full linear extension of
/// dominance (ascending lexicographic order on padded parts), subtracting
/// the projection onto every earlier partition of the weight class rather
/// than only the dominance-comparable ones. Uniqueness of the orthogonal
/// family makes this agree with [`macdonald_p`]; the comparison is the
/// uniqueness check.
pub fn macdonald_p_lex_extension(lambda: &Partition, n: usize, k: usize) -> LaurentPoly {
    assert!(lambda.len() <= n, "partition does not fit");
    let delta = delta_weight(n, k);
    let mut class = enumerate_partitions(lambda.weight(), n);
    class.sort_by_key(Partition::padded);
    let mut built: Vec<(Partition, LaurentPoly, QRat)> = Vec::new();
    for mu in &class {
        let mut p = monomial_symmetric(mu, n);
        let m_mu = p.clone();
        for (_, p_nu, norm_nu) in &built {
            let num = inner_product_with_delta(&m_mu, p_nu, &delta);
            if num.is_zero() {
                continue;
            }
            p = p.sub(&p_nu.scalar_mul(&num.div(norm_nu)));
        }
        let norm = inner_product_with_delta(&p, &p, &delta);
        assert!(!norm.is_zero(), "degenerate Gram matrix: <P_{mu}, P_{mu}> = 0");
        built.push((mu.clone(), p, norm));
    }
    built
        .into_iter()
        .find(|(mu, _, _)| mu.parts() == lambda.parts())
        .expect("weight class enumeration missed the target")
        .1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{dominance_leq, norm_formula};
    use crate::qfield::{BigRat, QPoly};
    use num_bigint::BigInt;
    use tempfile::tempdir;

    fn p(parts: &[usize], n: usize) -> Partition {
        Partition::new(parts, n)
    }

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
    fn dominance_minimal_cases_are_monomial() {
        let mut basis = MacdonaldBasis::new(2, 2);
        assert_eq!(
            basis.polynomial(&p(&[1], 2)),
            monomial_symmetric(&p(&[1], 2), 2)
        );
        for k in 1..=3 {
            let mut basis = MacdonaldBasis::new(2, k);
            assert_eq!(
                basis.polynomial(&p(&[1, 1], 2)),
                monomial_symmetric(&p(&[1, 1], 2), 2)
            );
        }
    }

    #[test]
    fn row_two_coefficient() {
        // P_(2) = m_(2) + c m_(1,1) with c = (1-t)(1+q)/(1-qt) at t = q^2
        let mut basis = MacdonaldBasis::new(2, 2);
        let p2 = basis.polynomial(&p(&[2], 2));
        let t = QRat::q_pow(2);
        let c = QRat::one()
            .sub(&t)
            .mul(&qr(&[1, 1], &[1]))
            .div(&QRat::one().sub(&QRat::q().mul(&t)));
        let want = monomial_symmetric(&p(&[2], 2), 2)
            .add(&monomial_symmetric(&p(&[1, 1], 2), 2).scalar_mul(&c));
        assert_eq!(p2, want);
    }

    #[test]
    fn norm_small_cases() {
        let mut basis = MacdonaldBasis::new(2, 2);
        assert_eq!(basis.norm(&p(&[], 2)), qr(&[1, 1, 1], &[1]));
        assert_eq!(basis.norm(&p(&[1], 2)), qr(&[1, 0, 1], &[1]));
        let mut basis = MacdonaldBasis::new(2, 1);
        assert!(basis.norm(&p(&[1], 2)).is_one());
    }

    #[test]
    fn norm_matches_closed_form_small_sweep() {
        for n in 2..=3 {
            for k in 1..=2 {
                let mut basis = MacdonaldBasis::new(n, k);
                for w in 0..=3 {
                    for lam in enumerate_partitions(w, n) {
                        assert_eq!(
                            basis.norm(&lam),
                            norm_formula(&lam, n, k),
                            "lambda={lam} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn triangular_monic_symmetric() {
        for n in 2..=3 {
            for k in 1..=3 {
                let mut basis = MacdonaldBasis::new(n, k);
                for w in 0..=4 {
                    for lam in enumerate_partitions(w, n) {
                        let poly = basis.polynomial(&lam);
                        let expansion = monomial_expansion(&poly, n)
                            .expect("P_lambda must be symmetric");
                        for (mu, c) in &expansion {
                            assert!(
                                dominance_leq(mu, &lam),
                                "P_{lam} contains m_{mu} (n={n}, k={k})"
                            );
                            if mu.parts() == lam.parts() {
                                assert!(c.is_one(), "P_{lam} is not monic");
                            }
                        }
                        // symmetry under adjacent transpositions
                        for i in 0..n - 1 {
                            let mut swap: Vec<usize> = (0..n).collect();
                            swap.swap(i, i + 1);
                            assert_eq!(poly.embed(n, &swap), poly, "P_{lam} asymmetric");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_small_cases() {
        let mut basis = MacdonaldBasis::new(2, 2);
        let r = verify_orthogonality(2, 2, 2, &mut basis);
        assert!(r.pass());
        assert_eq!(r.pairs_checked, 1);
        let r = verify_orthogonality(0, 2, 2, &mut basis);
        assert!(r.pass());
        assert_eq!(r.pairs_checked, 0);
        let mut basis = MacdonaldBasis::new(3, 1);
        let r = verify_orthogonality(3, 3, 1, &mut basis);
        assert!(r.pass());
        assert_eq!(r.pairs_checked, 3);
    }

    #[test]
    fn cauchy_small_cases() {
        let mut basis = MacdonaldBasis::new(2, 2);
        assert!(verify_cauchy(2, 2, 2, 0, &mut basis).pass());
        assert!(verify_cauchy(2, 2, 2, 1, &mut basis).pass());
        // unequal variable counts
        let mut basis = MacdonaldBasis::new(2, 1);
        assert!(verify_cauchy(1, 2, 1, 2, &mut basis).pass());
    }

    #[test]
    fn lex_extension_gives_same_basis() {
        for n in 2..=3 {
            for k in 1..=2 {
                let mut basis = MacdonaldBasis::new(n, k);
                for w in 0..=3 {
                    for lam in enumerate_partitions(w, n) {
                        assert_eq!(
                            macdonald_p_lex_extension(&lam, n, k),
                            basis.polynomial(&lam),
                            "lambda={lam} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn constant_term_is_n_factorial_times_norm() {
        for (n, k) in [(2, 1), (2, 2), (3, 2)] {
            let mut basis = MacdonaldBasis::new(n, k);
            let nf = QRat::from_int((1..=n as i64).product());
            let ct = basis.delta().constant_term();
            assert_eq!(nf.mul(&basis.norm(&p(&[], n))), ct);
            assert_eq!(nf.mul(&norm_formula(&p(&[], n), n, k)), ct);
        }
    }

    #[test]
    fn monomial_expansion_detects_asymmetry() {
        let not_symmetric = LaurentPoly::var(2, 0);
        assert!(monomial_expansion(&not_symmetric, 2).is_none());
        let symmetric = monomial_symmetric(&p(&[2, 1], 2), 2);
        let exp = monomial_expansion(&symmetric, 2).unwrap();
        assert_eq!(exp.len(), 1);
        assert_eq!(exp[0].0.parts(), &[2, 1]);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempdir().unwrap();
        let mut basis = MacdonaldBasis::new(2, 2);
        basis.polynomial(&p(&[2], 2));
        basis.norm(&p(&[1], 2));
        let path = basis.save_cache(dir.path()).unwrap();
        assert!(path.ends_with(MacdonaldBasis::cache_file_name(2, 2)));
        let loaded = MacdonaldBasis::load_cache(dir.path(), 2, 2)
            .unwrap()
            .unwrap();
        assert_eq!(loaded.table, basis.table);
        assert_eq!(loaded.norms, basis.norms);
        // absent context is a clean miss
        assert!(MacdonaldBasis::load_cache(dir.path(), 3, 2).unwrap().is_none());
        // corrupt content is an error, not a silent miss
        fs::write(&path, b"{not json").unwrap();
        assert!(MacdonaldBasis::load_cache(dir.path(), 2, 2).is_err());
    }
}
