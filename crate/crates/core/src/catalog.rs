//! Catalog of branch polynomials: every subtree up to a size bound, keyed by
//! the determinant it contributes when hung below a parent vertex.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Signed;
use rayon::prelude::*;

use crate::charpoly::branch_pair;
use crate::error::{Error, Result};
use crate::poly::RationalPolynomial;
use crate::tree::{enumerate_rooted_trees, MAX_ENUM_P};

/// Largest branch size (edges, counting the edge to the parent) supported.
pub const MAX_CATALOG_EDGES: usize = MAX_ENUM_P - 1;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// The part below the parent, rooted at the vertex adjacent to it.
    pub tree: crate::tree::RootedTree,
    /// Same determinant with that root deleted.
    pub numerator: RationalPolynomial,
    /// Degree of the root counting the edge to the parent.
    pub root_degree: usize,
}

#[derive(Debug)]
pub struct Catalog {
    max_edges: usize,
    entries: HashMap<RationalPolynomial, Vec<CatalogEntry>>,
    normalized: HashMap<RationalPolynomial, Vec<RationalPolynomial>>,
    keys: Vec<RationalPolynomial>,
}

/// Content-free form with the sign of the leading coefficient `(-1)^degree`.
pub fn normalized_key(f: &RationalPolynomial) -> RationalPolynomial {
    let prim = f.primitive();
    match prim.degree() {
        Some(d) if d % 2 == 1 => -prim,
        _ => prim,
    }
}

impl Catalog {
    pub fn build(max_edges: usize) -> Result<Self> {
        if max_edges > MAX_CATALOG_EDGES {
            return Err(Error::InvalidInput(format!(
                "catalog bound {max_edges} exceeds {MAX_CATALOG_EDGES}"
            )));
        }
        let trees: Vec<_> = (1..=max_edges)
            .map(enumerate_rooted_trees)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let computed: Vec<_> = trees
            .into_par_iter()
            .map(|t| {
                let (key, numerator) = branch_pair(&t);
                let entry = CatalogEntry {
                    numerator,
                    root_degree: t.degree(t.root()) + 1,
                    tree: t,
                };
                (key, entry)
            })
            .collect();
        let mut entries: HashMap<RationalPolynomial, Vec<CatalogEntry>> = HashMap::new();
        for (key, entry) in computed {
            entries.entry(key).or_default().push(entry);
        }
        let mut keys: Vec<_> = entries.keys().cloned().collect();
        keys.sort_by_cached_key(|k| (k.degree(), k.to_string()));
        let mut normalized: HashMap<_, Vec<_>> = HashMap::new();
        for k in &keys {
            normalized.entry(normalized_key(k)).or_default().push(k.clone());
        }
        Ok(Catalog {
            max_edges,
            entries,
            normalized,
            keys,
        })
    }

    /// Process-wide cached catalog for a given bound.
    pub fn shared(max_edges: usize) -> Result<Arc<Catalog>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Catalog>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&max_edges) {
            return Ok(c.clone());
        }
        let built = Arc::new(Catalog::build(max_edges)?);
        cache.lock().unwrap().insert(max_edges, built.clone());
        Ok(built)
    }

    pub fn max_edges(&self) -> usize {
        self.max_edges
    }

    /// All keys ordered by degree, then text.
    pub fn keys(&self) -> &[RationalPolynomial] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, key: &RationalPolynomial) -> bool {
        self.entries.contains_key(key)
    }

    /// Entries for a polynomial: the exact key if present, otherwise every
    /// key sharing its normalized form.
    pub fn lookup(&self, f: &RationalPolynomial) -> Vec<&CatalogEntry> {
        if let Some(list) = self.entries.get(f) {
            return list.iter().collect();
        }
        self.normalized
            .get(&normalized_key(f))
            .into_iter()
            .flatten()
            .flat_map(|k| self.entries[k].iter())
            .collect()
    }

    pub fn exact(&self, key: &RationalPolynomial) -> &[CatalogEntry] {
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Map from key to the subtrees realizing it.
pub fn subtree_catalog(max_edges: usize) -> Result<Arc<Catalog>> {
    Catalog::shared(max_edges)
}

/// True when the leading coefficient has the sign `(-1)^degree`, as every
/// branch polynomial does.
pub fn has_branch_sign(f: &RationalPolynomial) -> bool {
    match f.degree() {
        Some(d) => f.lead().is_negative() == (d % 2 == 1),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str) -> RationalPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn lone_edge() {
        let c = Catalog::build(1).unwrap();
        assert_eq!(c.len(), 1);
        let e = c.exact(&p("-z"));
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].tree.p(), 1);
        assert_eq!(e[0].numerator, RationalPolynomial::one());
        assert_eq!(e[0].root_degree, 1);
    }

    #[test]
    fn three_vertex_star_branch() {
        let c = Catalog::build(3).unwrap();
        let e = c.exact(&p("-3z^3+2z"));
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].tree.canonical_code().0, "(()())");
        assert_eq!(e[0].numerator, p("z^2"));
        assert_eq!(e[0].root_degree, 3);
    }

    #[test]
    fn normalized_lookup() {
        let c = Catalog::build(3).unwrap();
        // Same key up to content and sign.
        let hits = c.lookup(&p("6z^3-4z"));
        assert_eq!(hits.len(), 1);
        assert_eq!(normalized_key(&p("6z^3-4z")), p("-3z^3+2z"));
    }

    #[test]
    fn keys_have_branch_shape() {
        let c = Catalog::build(6).unwrap();
        for k in c.keys() {
            assert!(has_branch_sign(k));
            let n = k.degree().unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(k.eval_i64(1), rat(sign));
        }
        assert!(Catalog::build(12).is_err());
    }
}
