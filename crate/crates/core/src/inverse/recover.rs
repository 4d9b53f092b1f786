//! Shape recovery from the polynomial pair `(ψ, ψ̂)`.
//!
//! Every vertex is processed the same way. Its pair satisfies
//! `ψ/ψ̂ = -d·z - Σ_c ψ̂_c/ψ_c` with `ψ̂ = Π_c ψ_c`, where `c` runs over its
//! children and `(ψ_c, ψ̂_c)` is the pair of the branch below `c`. The degree
//! `d` comes from the leading coefficients, the `ψ_c` from splitting `ψ̂`
//! into catalog keys, the child degrees from the residue at infinity
//! `Σ 1/d_c`, and the numerators `ψ̂_c` from matching coefficients. When the
//! factors share roots the coefficient system is singular and the remaining
//! freedom is resolved by trying catalog products consistent with it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::diophantine::diophantine_reciprocals_bounded;
use super::linear::{solve, AffineSolution};
use crate::catalog::{Catalog, MAX_CATALOG_EDGES};
use crate::charpoly::{psi, psi_hat};
use crate::error::{Error, Result};
use crate::poly::{rat, RationalPolynomial};
use crate::tree::{CanonicalCode, RootedTree};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TraceEntry {
    pub branch: String,
    pub d0: usize,
    pub splitting: Vec<String>,
    pub diophantine: Vec<Vec<u64>>,
    pub status: String,
}

#[derive(Clone, Debug)]
pub struct RecoveryResult {
    pub shapes: Vec<RootedTree>,
    pub trace: Vec<TraceEntry>,
}

impl RecoveryResult {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "shapes": self.shapes.iter().map(RootedTree::to_json_value).collect::<Vec<_>>(),
            "trace": self.trace,
        })
    }

    pub fn contains(&self, t: &RootedTree) -> bool {
        let code = t.canonical_code();
        self.shapes.iter().any(|s| s.canonical_code() == code)
    }
}

/// Step 1: `d(v₀) = lead ψ / (-lead ψ̂)`.
pub fn recover_d0(psi: &RationalPolynomial, psi_hat: &RationalPolynomial) -> Result<usize> {
    match (psi.degree(), psi_hat.degree()) {
        (Some(a), Some(b)) if a == b + 1 => {}
        _ => return Err(Error::NonIntegerDegreeRatio),
    }
    positive_integer(&(psi.lead() / -psi_hat.lead())).ok_or(Error::NonIntegerDegreeRatio)
}

fn positive_integer(x: &BigRational) -> Option<usize> {
    (x.is_integer() && x.is_positive()).then(|| x.to_integer().to_usize()).flatten()
}

/// Step 4: `Σ 1/d_c`, read off as the `z⁻¹` coefficient of `ψ/ψ̂ + d·z`.
pub fn reciprocal_sum(psi: &RationalPolynomial, psi_hat: &RationalPolynomial, d: usize) -> Option<BigRational> {
    let n = psi + &(&RationalPolynomial::monomial(rat(d as i64), 1) * psi_hat);
    let k = psi_hat.degree()?;
    if n.degree().is_some_and(|dn| dn + 1 > k) {
        return None;
    }
    if k == 0 {
        return Some(BigRational::zero());
    }
    Some(n.coeff(k - 1) / psi_hat.lead())
}

/// Step 2: every multiset of `m` catalog keys whose product is `psi_hat`.
pub fn split_psihat(psi_hat: &RationalPolynomial, m: usize, catalog: &Catalog) -> Result<Vec<Vec<RationalPolynomial>>> {
    let mut out = Vec::new();
    let keys = catalog.keys();
    let probes: Vec<Vec<BigInt>> = keys.iter().map(probe_values).collect();
    let mut current = Vec::new();
    split_rec(psi_hat, m, 0, keys, &probes, catalog, &mut current, &mut out);
    if out.is_empty() {
        return Err(Error::NoAdmissibleSplitting);
    }
    Ok(out)
}

const PROBES: [i64; 2] = [2, 3];

fn probe_values(f: &RationalPolynomial) -> Vec<BigInt> {
    PROBES.iter().map(|&z| f.eval_i64(z).to_integer()).collect()
}

#[allow(clippy::too_many_arguments)]
fn split_rec(
    rem: &RationalPolynomial,
    left: usize,
    start: usize,
    keys: &[RationalPolynomial],
    probes: &[Vec<BigInt>],
    catalog: &Catalog,
    current: &mut Vec<RationalPolynomial>,
    out: &mut Vec<Vec<RationalPolynomial>>,
) {
    let Some(deg) = rem.degree() else { return };
    if left == 0 {
        if rem.is_one() {
            out.push(current.clone());
        }
        return;
    }
    if left == 1 {
        if let Some(i) = keys.iter().position(|k| k == rem) {
            if i >= start && catalog.contains(rem) {
                current.push(rem.clone());
                out.push(current.clone());
                current.pop();
            }
        }
        return;
    }
    // Keys are primitive integer polynomials, so a divisor divides the
    // integer values at every integer point.
    let rem_probe = probe_values(rem);
    for (i, key) in keys.iter().enumerate().skip(start) {
        let kd = key.degree().unwrap();
        if kd * left > deg {
            break;
        }
        let divides = probes[i]
            .iter()
            .zip(&rem_probe)
            .all(|(a, b)| !a.is_zero() && (b % a).is_zero());
        if !divides {
            continue;
        }
        if let Ok(q) = rem.div_exact(key) {
            current.push(key.clone());
            split_rec(&q, left - 1, i, keys, probes, catalog, current, out);
            current.pop();
        }
    }
}

trait IsOne {
    fn is_one(&self) -> bool;
}

impl IsOne for RationalPolynomial {
    fn is_one(&self) -> bool {
        self.degree() == Some(0) && self.lead().is_one()
    }
}

/// Step 3: numerators `ψ̂_c` solving
/// `ψ + d·z·ψ̂ = -Σ_c ψ̂_c Π_{j≠c} ψ_j` with `lead ψ̂_c = -lead ψ_c / d_c`.
/// Returns the affine solution space; coordinates are the coefficients of
/// each `ψ̂_c` in turn, ascending.
pub fn undetermined_coefficients(
    psi: &RationalPolynomial,
    psi_hat: &RationalPolynomial,
    d: usize,
    factors: &[RationalPolynomial],
    degrees: &[u64],
) -> Result<AffineSolution> {
    let k = psi_hat.degree().ok_or(Error::SingularSystem)?;
    let rhs_poly = -(psi + &(&RationalPolynomial::monomial(rat(d as i64), 1) * psi_hat));
    if rhs_poly.degree().is_some_and(|dr| dr >= k) {
        return Err(Error::DegreeOverflow);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.degree().unwrap_or(0)).collect();
    let n: usize = sizes.iter().sum();
    let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for c in 0..factors.len() {
        let others = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != c)
            .fold(RationalPolynomial::one(), |acc, (_, g)| &acc * g);
        for t in 0..sizes[c] {
            let col = others.shift(t);
            if col.degree().is_some_and(|dc| dc >= k) {
                return Err(Error::DegreeOverflow);
            }
            cols.push((0..k).map(|i| col.coeff(i)).collect());
        }
    }
    let mut rows: Vec<Vec<BigRational>> = (0..k).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut rhs: Vec<BigRational> = (0..k).map(|i| rhs_poly.coeff(i)).collect();
    let mut offset = 0;
    for (c, f) in factors.iter().enumerate() {
        let mut row = vec![BigRational::zero(); n];
        row[offset + sizes[c] - 1] = BigRational::one();
        rows.push(row);
        rhs.push(-f.lead() / rat(degrees[c] as i64));
        offset += sizes[c];
    }
    solve(rows, rhs, n).ok_or(Error::SingularSystem)
}

/// Splits a coordinate vector into one polynomial per factor.
fn unpack(x: &[BigRational], sizes: &[usize]) -> Vec<RationalPolynomial> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for &s in sizes {
        out.push(RationalPolynomial::new(x[offset..offset + s].to_vec()));
        offset += s;
    }
    out
}

struct Recoverer {
    catalog: Arc<Catalog>,
    memo: HashMap<(RationalPolynomial, RationalPolynomial, bool), Vec<RootedTree>>,
    products: HashMap<(usize, usize), Vec<RationalPolynomial>>,
    trace: Vec<TraceEntry>,
}

impl Recoverer {
    fn new(catalog: Arc<Catalog>) -> Self {
        Recoverer {
            catalog,
            memo: HashMap::new(),
            products: HashMap::new(),
            trace: Vec::new(),
        }
    }

    /// Products of exactly `count` catalog keys with total degree `degree`.
    fn key_products(&mut self, degree: usize, count: usize) -> Vec<RationalPolynomial> {
        if let Some(v) = self.products.get(&(degree, count)) {
            return v.clone();
        }
        fn rec(keys: &[RationalPolynomial], start: usize, degree: usize, count: usize, acc: RationalPolynomial, out: &mut Vec<RationalPolynomial>) {
            if count == 0 {
                if degree == 0 {
                    out.push(acc);
                }
                return;
            }
            for (i, k) in keys.iter().enumerate().skip(start) {
                let kd = k.degree().unwrap();
                if kd * count > degree {
                    break;
                }
                rec(keys, i, degree - kd, count - 1, &acc * k, out);
            }
        }
        let mut out = Vec::new();
        rec(self.catalog.keys(), 0, degree, count, RationalPolynomial::one(), &mut out);
        out.sort_by_cached_key(|p| p.to_string());
        out.dedup();
        self.products.insert((degree, count), out.clone());
        out
    }

    /// Subtrees (rooted at this vertex) realizing the pair.
    fn node(&mut self, p: &RationalPolynomial, q: &RationalPolynomial, has_parent: bool, branch: &str) -> Vec<RootedTree> {
        let key = (p.clone(), q.clone(), has_parent);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let result = self.node_uncached(p, q, has_parent, branch);
        self.memo.insert(key, result.clone());
        result
    }

    fn node_uncached(&mut self, p: &RationalPolynomial, q: &RationalPolynomial, has_parent: bool, branch: &str) -> Vec<RootedTree> {
        let Ok(d) = recover_d0(p, q) else {
            return Vec::new();
        };
        let m = d - usize::from(has_parent);
        if m == 0 {
            let leaf = has_parent && q.is_one() && *p == RationalPolynomial::monomial(rat(-1), 1);
            return if leaf { vec![RootedTree::single_vertex()] } else { Vec::new() };
        }
        let Some(qsum) = reciprocal_sum(p, q, d) else {
            return Vec::new();
        };
        let splittings = match split_psihat(q, m, &self.catalog) {
            Ok(s) => s,
            Err(_) => {
                self.trace.push(TraceEntry {
                    branch: branch.to_string(),
                    d0: d,
                    splitting: Vec::new(),
                    diophantine: Vec::new(),
                    status: "rejected: no admissible splitting".into(),
                });
                return Vec::new();
            }
        };
        let mut found: BTreeMap<CanonicalCode, RootedTree> = BTreeMap::new();
        for split in splittings {
            // A child of degree d_c has d_c - 1 children of its own, so its
            // branch polynomial has degree at least d_c.
            let bound = split.iter().filter_map(RationalPolynomial::degree).max().unwrap_or(1);
            let sols = diophantine_reciprocals_bounded(&qsum, m, Some(bound as u64));
            let mut produced = 0usize;
            let mut reasons: Vec<&'static str> = Vec::new();
            if sols.is_empty() {
                reasons.push("no Diophantine solution");
            }
            for sol in &sols {
                let assignments = assign_degrees(&split, sol);
                if assignments.is_empty() {
                    reasons.push("no admissible degree assignment");
                }
                for degs in assignments {
                    match self.numerators(p, q, d, &split, &degs) {
                        Ok(options) if !options.is_empty() => {
                            for numerators in options {
                                let trees = self.assemble(&split, &numerators, branch);
                                if trees.is_empty() {
                                    reasons.push("subtree recursion failed");
                                }
                                for t in trees {
                                    produced += 1;
                                    found.entry(t.canonical_code()).or_insert(t);
                                }
                            }
                        }
                        Ok(_) => reasons.push("no numerators in catalog"),
                        Err(Error::DegreeOverflow) => reasons.push("degree overflow"),
                        Err(_) => reasons.push("singular system"),
                    }
                }
            }
            reasons.sort_unstable();
            reasons.dedup();
            let status = if produced > 0 {
                "accepted".to_string()
            } else {
                format!("rejected: {}", reasons.join(", "))
            };
            self.trace.push(TraceEntry {
                branch: branch.to_string(),
                d0: d,
                splitting: split.iter().map(|f| f.to_string()).collect(),
                diophantine: sols,
                status,
            });
        }
        found.into_values().collect()
    }

    /// All numerator tuples consistent with Step 3. A unique solution is
    /// returned directly; otherwise the free factors are filled with catalog
    /// products of the right size and leading coefficient, one factor at a
    /// time, keeping only choices the linear system still admits.
    fn numerators(
        &mut self,
        p: &RationalPolynomial,
        q: &RationalPolynomial,
        d: usize,
        factors: &[RationalPolynomial],
        degs: &[u64],
    ) -> Result<Vec<Vec<RationalPolynomial>>> {
        let base = undetermined_coefficients(p, q, d, factors, degs)?;
        let sizes: Vec<usize> = factors.iter().map(|f| f.degree().unwrap()).collect();
        if base.is_unique() {
            return Ok(vec![unpack(&base.particular, &sizes)]);
        }
        let determined = base.determined();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        let free: Vec<usize> = (0..factors.len())
            .filter(|&c| (offsets[c]..offsets[c] + sizes[c]).any(|i| !determined[i]))
            .collect();
        let mut candidates: Vec<Vec<RationalPolynomial>> = Vec::with_capacity(free.len());
        for &c in &free {
            let lead = -factors[c].lead() / rat(degs[c] as i64);
            let list: Vec<_> = self
                .key_products(sizes[c] - 1, degs[c] as usize - 1)
                .into_iter()
                .filter(|g| g.lead() == lead)
                .collect();
            candidates.push(list);
        }
        let mut out = Vec::new();
        let mut fixed: Vec<(usize, RationalPolynomial)> = Vec::new();
        self.fill(p, q, d, factors, degs, &sizes, &offsets, &free, &candidates, 0, 0, &mut fixed, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        p: &RationalPolynomial,
        q: &RationalPolynomial,
        d: usize,
        factors: &[RationalPolynomial],
        degs: &[u64],
        sizes: &[usize],
        offsets: &[usize],
        free: &[usize],
        candidates: &[Vec<RationalPolynomial>],
        depth: usize,
        min_index: usize,
        fixed: &mut Vec<(usize, RationalPolynomial)>,
        out: &mut Vec<Vec<RationalPolynomial>>,
    ) -> Result<()> {
        let sol = match constrained(p, q, d, factors, degs, sizes, offsets, fixed) {
            Some(s) => s,
            None => return Ok(()),
        };
        if depth == free.len() {
            if sol.is_unique() {
                out.push(unpack(&sol.particular, sizes));
            }
            return Ok(());
        }
        let c = free[depth];
        // Interchangeable factors take candidates in nondecreasing order.
        let same_as_prev = depth > 0 && {
            let prev = free[depth - 1];
            factors[prev] == factors[c] && degs[prev] == degs[c]
        };
        let start = if same_as_prev { min_index } else { 0 };
        for (i, cand) in candidates[depth].iter().enumerate().skip(start) {
            fixed.push((c, cand.clone()));
            self.fill(p, q, d, factors, degs, sizes, offsets, free, candidates, depth + 1, i, fixed, out)?;
            fixed.pop();
        }
        Ok(())
    }

    /// Recursively recovers each branch and grafts the combinations.
    fn assemble(&mut self, factors: &[RationalPolynomial], numerators: &[RationalPolynomial], branch: &str) -> Vec<RootedTree> {
        let mut per_child: Vec<Vec<RootedTree>> = Vec::with_capacity(factors.len());
        for (i, (f, g)) in factors.iter().zip(numerators).enumerate() {
            let sub = self.node(f, g, true, &format!("{branch}.{}", i + 1));
            if sub.is_empty() {
                return Vec::new();
            }
            per_child.push(sub);
        }
        let mut out: BTreeMap<CanonicalCode, RootedTree> = BTreeMap::new();
        let mut idx = vec![0usize; per_child.len()];
        loop {
            let kids: Vec<RootedTree> = idx.iter().zip(&per_child).map(|(&i, v)| v[i].clone()).collect();
            let t = RootedTree::graft(&kids).canonical_form();
            out.entry(t.canonical_code()).or_insert(t);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < per_child[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        out.into_values().collect()
    }
}

/// Step 3 system with some numerators pinned to given polynomials.
#[allow(clippy::too_many_arguments)]
fn constrained(
    p: &RationalPolynomial,
    q: &RationalPolynomial,
    d: usize,
    factors: &[RationalPolynomial],
    degs: &[u64],
    sizes: &[usize],
    offsets: &[usize],
    fixed: &[(usize, RationalPolynomial)],
) -> Option<AffineSolution> {
    let base = undetermined_coefficients(p, q, d, factors, degs).ok()?;
    if fixed.is_empty() {
        return Some(base);
    }
    // Re-solve in the nullspace coordinates: x = x0 + N t with pinned entries.
    let dims = base.nullspace.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (c, g) in fixed {
        for t in 0..sizes[*c] {
            let i = offsets[*c] + t;
            rows.push(base.nullspace.iter().map(|v| v[i].clone()).collect::<Vec<_>>());
            rhs.push(g.coeff(t) - &base.particular[i]);
        }
    }
    let sub = solve(rows, rhs, dims)?;
    let shift = |t: &[BigRational]| -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); base.particular.len()];
        for (v, tv) in base.nullspace.iter().zip(t) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += vi * tv;
            }
        }
        x
    };
    let delta = shift(&sub.particular);
    let particular: Vec<_> = base.particular.iter().zip(&delta).map(|(a, b)| a + b).collect();
    let nullspace = sub.nullspace.iter().map(|t| shift(t)).collect();
    Some(AffineSolution {
        particular,
        nullspace,
    })
}

/// Distinct ways to give the degrees `sol` to the factors. A factor `-z` is a
/// pendant vertex and takes degree 1; any other factor needs a degree at
/// least 2, at most its own degree, and dividing its leading coefficient.
fn assign_degrees(factors: &[RationalPolynomial], sol: &[u64]) -> Vec<Vec<u64>> {
    let minus_z = RationalPolynomial::monomial(rat(-1), 1);
    let admissible = |f: &RationalPolynomial, d: u64| -> bool {
        if *f == minus_z {
            return d == 1;
        }
        let deg = f.degree().unwrap_or(0) as u64;
        let lead = f.lead().to_integer();
        d >= 2 && d <= deg && (lead % BigInt::from(d)).is_zero()
    };
    let mut remaining: BTreeMap<u64, usize> = BTreeMap::new();
    for &d in sol {
        *remaining.entry(d).or_default() += 1;
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(factors.len());
    fn rec(
        factors: &[RationalPolynomial],
        remaining: &mut BTreeMap<u64, usize>,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
        admissible: &dyn Fn(&RationalPolynomial, u64) -> bool,
    ) {
        let i = current.len();
        if i == factors.len() {
            out.push(current.clone());
            return;
        }
        let floor = if i > 0 && factors[i - 1] == factors[i] { current[i - 1] } else { 0 };
        let options: Vec<u64> = remaining.iter().filter(|(_, &n)| n > 0).map(|(&d, _)| d).collect();
        for d in options {
            if d < floor || !admissible(&factors[i], d) {
                continue;
            }
            *remaining.get_mut(&d).unwrap() -= 1;
            current.push(d);
            rec(factors, remaining, current, out, admissible);
            current.pop();
            *remaining.get_mut(&d).unwrap() += 1;
        }
    }
    rec(factors, &mut remaining, &mut current, &mut out, &admissible);
    out
}

/// Steps 1–6 with backtracking. Every returned shape reproduces both input
/// polynomials exactly.
pub fn recover_shape(psi_in: &RationalPolynomial, psi_hat_in: &RationalPolynomial) -> Result<RecoveryResult> {
    recover_d0(psi_in, psi_hat_in)?;
    let deg_hat = psi_hat_in.degree().unwrap_or(0);
    if deg_hat == 0 || deg_hat > MAX_CATALOG_EDGES {
        return Err(Error::NoShapeFound);
    }
    let catalog = Catalog::shared(deg_hat)?;
    let mut rec = Recoverer::new(catalog);
    let candidates = rec.node(psi_in, psi_hat_in, false, "v0");
    let mut shapes = Vec::new();
    let mut seen = HashSet::new();
    for t in candidates {
        let ok = psi(&t) == *psi_in && psi_hat(&t).ok().as_ref() == Some(psi_hat_in);
        if ok && seen.insert(t.canonical_code()) {
            shapes.push(t);
        }
    }
    let mut trace = rec.trace;
    trace.sort();
    if shapes.is_empty() {
        return Err(Error::NoShapeFound);
    }
    shapes.sort_by_key(|t| t.canonical_code());
    Ok(RecoveryResult { shapes, trace })
}

/// Shapes on `p` vertices whose ratio `ψ/ψ̂` equals `num/den`, for input
/// where common factors may have been cancelled.
pub fn recover_from_ratio(num: &RationalPolynomial, den: &RationalPolynomial, p: usize) -> Result<Vec<RootedTree>> {
    let trees = crate::tree::enumerate_rooted_trees(p)?;
    let out: Vec<_> = trees
        .into_iter()
        .filter(|t| t.p() >= 2)
        .filter(|t| {
            let a = psi(t);
            let b = psi_hat(t).expect("p >= 2");
            &a * den == num * &b
        })
        .collect();
    if out.is_empty() {
        return Err(Error::NoShapeFound);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn p(s: &str) -> RationalPolynomial {
        s.parse().unwrap()
    }

    fn snowflake_pair() -> (RationalPolynomial, RationalPolynomial) {
        (
            p("-108z^11+258z^9-202z^7+52z^5"),
            p("36z^10-75z^8+52z^6-12z^4"),
        )
    }

    #[test]
    fn d0_examples() {
        let (a, b) = snowflake_pair();
        assert_eq!(recover_d0(&a, &b), Ok(3));
        assert_eq!(recover_d0(&p("3z^4-3z^2"), &p("-z^3")), Ok(3));
        assert_eq!(recover_d0(&p("z^2-1"), &p("-z")), Ok(1));
        assert_eq!(recover_d0(&p("z^2-1"), &p("-2z")), Err(Error::NonIntegerDegreeRatio));
    }

    #[test]
    fn residue_sum() {
        let (a, b) = snowflake_pair();
        assert_eq!(reciprocal_sum(&a, &b, 3), Some(ratio(11, 12)));
        assert_eq!(reciprocal_sum(&p("z^2-1"), &p("-z"), 1), Some(rat(1)));
    }

    #[test]
    fn splitting_of_snowflake() {
        let (_, b) = snowflake_pair();
        let cat = Catalog::build(10).unwrap();
        let splits = split_psihat(&b, 3, &cat).unwrap();
        let want = vec![p("-3z^3+2z"), p("-3z^3+2z"), p("4z^4-3z^2")];
        assert!(splits.contains(&want), "{splits:?}");
        // No factor is a bare power of z.
        let monomial = |f: &RationalPolynomial| f.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        assert!(splits.iter().flatten().all(|f| !monomial(f)));
    }

    #[test]
    fn star_splitting_and_single_factor() {
        let cat = Catalog::build(3).unwrap();
        assert_eq!(split_psihat(&p("-z^3"), 3, &cat).unwrap(), vec![vec![p("-z"); 3]]);
        assert_eq!(split_psihat(&p("-z"), 1, &cat).unwrap(), vec![vec![p("-z")]]);
        assert_eq!(split_psihat(&p("z^2"), 1, &cat), Err(Error::NoAdmissibleSplitting));
    }

    #[test]
    fn numerators_of_snowflake_family() {
        let (a, b) = snowflake_pair();
        let factors = vec![p("-3z^3+2z"), p("-3z^3+2z"), p("4z^4-3z^2")];
        let sol = undetermined_coefficients(&a, &b, 3, &factors, &[3, 3, 4]).unwrap();
        // Equal factors leave their numerators tied together.
        assert!(!sol.is_unique());
        let mut r = Recoverer::new(Catalog::shared(10).unwrap());
        let options = r.numerators(&a, &b, 3, &factors, &[3, 3, 4]).unwrap();
        assert_eq!(options, vec![vec![p("z^2"), p("z^2"), p("-z^3")]]);
    }

    #[test]
    fn pendant_numerator() {
        // One edge: ψ = z²-1 = -z·(-z) - 1·1, so the numerator of -z is 1.
        let sol = undetermined_coefficients(&p("z^2-1"), &p("-z"), 1, &[p("-z")], &[1]).unwrap();
        assert!(sol.is_unique());
        assert_eq!(sol.particular, vec![rat(1)]);
    }

    #[test]
    fn snowflake_recovered_uniquely() {
        let (a, b) = snowflake_pair();
        let res = recover_shape(&a, &b).unwrap();
        assert_eq!(res.shapes.len(), 1);
        let t = &res.shapes[0];
        assert_eq!(t.p(), 11);
        let mut kid_degrees: Vec<_> = t.children(t.root()).iter().map(|&c| t.degree(c)).collect();
        kid_degrees.sort_unstable();
        assert_eq!(kid_degrees, vec![3, 3, 4]);
        let top: Vec<_> = res.trace.iter().filter(|e| e.branch == "v0").collect();
        assert!(!top.is_empty());
        assert!(top.iter().all(|e| e.d0 == 3 && e.diophantine == vec![vec![3, 3, 4]]));
    }

    #[test]
    fn inconsistent_pair_fails() {
        assert_eq!(recover_shape(&p("z^2-1"), &p("-3z")).unwrap_err(), Error::NonIntegerDegreeRatio);
        assert_eq!(recover_shape(&p("-2z^3+2z+1"), &p("2z^2-1")).unwrap_err(), Error::NoShapeFound);
    }

    #[test]
    fn ratio_mode_finds_star() {
        // Star: ψ/ψ̂ = (3z⁴-3z²)/(-z³) = (-3z²+3)/z after cancelling z².
        let shapes = recover_from_ratio(&p("-3z^2+3"), &p("z"), 4).unwrap();
        assert_eq!(shapes.len(), 1);
        assert_eq!(shapes[0].degree(shapes[0].root()), 3);
    }
}
