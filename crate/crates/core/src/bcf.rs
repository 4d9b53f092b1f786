//! Branched continued fractions: the expansion of `ψ/ψ̂` whose coefficients
//! are vertex degrees and whose branching mirrors the tree.
//!
//! A node of degree `d` has value `-d·z - Σ 1/child`, a pendant vertex has
//! value `-z`. The text form writes a node as `-dz`, then `+L/z` for its `L`
//! pendant children, then `-1/(…)` for every other child, ordered by the
//! canonical code of the subtree it stands for. `d = 1` is written `-z`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::rat;
use crate::tree::RootedTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedFraction {
    pub degree: usize,
    pub children: Vec<BranchedFraction>,
}

impl BranchedFraction {
    pub fn leaf() -> Self {
        BranchedFraction {
            degree: 1,
            children: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn code(&self) -> String {
        let mut parts: Vec<String> = self.children.iter().map(Self::code).collect();
        parts.sort_unstable();
        format!("({})", parts.concat())
    }

    /// Children in canonical order: pendant children first, then the rest by code.
    fn sorted(mut self) -> Self {
        self.children = self.children.into_iter().map(Self::sorted).collect();
        self.children.sort_by_cached_key(|c| (!c.is_leaf(), c.code()));
        self
    }

    /// Exact value at `z`.
    pub fn eval(&self, z: &BigRational) -> Result<BigRational> {
        let mut v = -(rat(self.degree as i64) * z);
        for c in &self.children {
            let cv = c.eval(z)?;
            if cv.is_zero() {
                return Err(Error::PoleAtZ);
            }
            v -= cv.recip();
        }
        Ok(v)
    }

    /// The rooted tree this fraction describes (root = top node).
    pub fn to_tree(&self) -> RootedTree {
        fn hat(f: &BranchedFraction) -> RootedTree {
            let kids: Vec<_> = f.children.iter().map(hat).collect();
            RootedTree::graft(&kids)
        }
        hat(self).canonical_form()
    }

    /// Checks that every degree equals the number of incident edges.
    fn check_degrees(&self, has_parent: bool) -> Result<()> {
        if self.degree != self.children.len() + usize::from(has_parent) {
            return Err(Error::Parse(format!(
                "degree {} does not match {} children",
                self.degree,
                self.children.len()
            )));
        }
        self.children.iter().try_for_each(|c| c.check_degrees(true))
    }
}

/// Expansion of `ψ/ψ̂` read off the tree.
pub fn bcf_expand(tree: &RootedTree) -> Result<BranchedFraction> {
    if tree.p() < 2 {
        return Err(Error::SingleVertex);
    }
    fn node(t: &RootedTree, v: usize) -> BranchedFraction {
        BranchedFraction {
            degree: t.degree(v),
            children: t.children(v).iter().map(|&c| node(t, c)).collect(),
        }
    }
    Ok(node(tree, tree.root()).sorted())
}

pub fn bcf_eval(f: &BranchedFraction, z: &BigRational) -> Result<BigRational> {
    f.eval(z)
}

impl fmt::Display for BranchedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            f.write_str("-z")?;
        } else {
            write!(f, "-{}z", self.degree)?;
        }
        let leaves = self.children.iter().filter(|c| c.is_leaf()).count();
        if leaves > 0 {
            write!(f, "+{leaves}/z")?;
        }
        for c in self.children.iter().filter(|c| !c.is_leaf()) {
            write!(f, "-1/({c})")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self) -> Error {
        Error::Parse(format!(
            "bad fraction at byte {} of {:?}",
            self.i,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.i..].starts_with(lit.as_bytes()) {
            self.i += lit.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i]).ok()?.parse().ok()
    }

    fn node(&mut self) -> Result<BranchedFraction> {
        if !self.eat("-") {
            return Err(self.err());
        }
        let degree = self.number().unwrap_or(1);
        if degree == 0 || !self.eat("z") {
            return Err(self.err());
        }
        let mut children = Vec::new();
        loop {
            if self.eat("+") {
                let n = self.number().ok_or_else(|| self.err())?;
                if !self.eat("/z") {
                    return Err(self.err());
                }
                children.extend(std::iter::repeat_with(BranchedFraction::leaf).take(n));
            } else if self.eat("-1/(") {
                children.push(self.node()?);
                if !self.eat(")") {
                    return Err(self.err());
                }
            } else {
                break;
            }
        }
        Ok(BranchedFraction { degree, children })
    }
}

/// Parses the text form; the top node is taken to be the root, so its degree
/// must equal its child count and every other degree must exceed it by one.
impl FromStr for BranchedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '−' { '-' } else { c })
            .collect();
        let mut p = Parser {
            s: text.as_bytes(),
            i: 0,
        };
        let f = p.node()?;
        if p.i != text.len() {
            return Err(p.err());
        }
        f.check_degrees(false)?;
        Ok(f.sorted())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{psi, psi_hat};
    use crate::poly::ratio;
    use crate::tree::enumerate_rooted_trees;

    fn t(p: usize, root: usize, edges: &[(usize, usize)]) -> RootedTree {
        RootedTree::from_edge_list(p, root, edges).unwrap()
    }

    #[test]
    fn text_forms() {
        assert_eq!(bcf_expand(&t(2, 0, &[(0, 1)])).unwrap().to_string(), "-z+1/z");
        assert_eq!(
            bcf_expand(&t(4, 1, &[(0, 1), (1, 2), (2, 3)])).unwrap().to_string(),
            "-2z+1/z-1/(-2z+1/z)"
        );
        assert_eq!(
            bcf_expand(&t(4, 0, &[(0, 1), (0, 2), (0, 3)])).unwrap().to_string(),
            "-3z+3/z"
        );
    }

    #[test]
    fn p2_value_at_two() {
        let f = bcf_expand(&t(2, 0, &[(0, 1)])).unwrap();
        assert_eq!(bcf_eval(&f, &rat(2)).unwrap(), ratio(-3, 2));
    }

    #[test]
    fn pole_where_psi_hat_vanishes() {
        // ψ̂ = -z for one edge, so the leaf node vanishes at 0.
        let f = bcf_expand(&t(2, 0, &[(0, 1)])).unwrap();
        assert_eq!(bcf_eval(&f, &rat(0)), Err(Error::PoleAtZ));
    }

    #[test]
    fn parse_roundtrip_and_tree() {
        for p in 2..=8 {
            for tree in enumerate_rooted_trees(p).unwrap() {
                let f = bcf_expand(&tree).unwrap();
                let back: BranchedFraction = f.to_string().parse().unwrap();
                assert_eq!(back, f);
                assert!(back.to_tree().is_isomorphic(&tree));
            }
        }
        assert!("-2z+1/z".parse::<BranchedFraction>().is_err());
        assert!("-z+1/z)".parse::<BranchedFraction>().is_err());
        assert!("-0z".parse::<BranchedFraction>().is_err());
    }

    #[test]
    fn value_is_psi_ratio() {
        for p in 2..=7 {
            for tree in enumerate_rooted_trees(p).unwrap() {
                let f = bcf_expand(&tree).unwrap();
                let (a, b) = (psi(&tree), psi_hat(&tree).unwrap());
                for z in [ratio(3, 7), ratio(-5, 2), ratio(11, 3)] {
                    let hat = b.eval(&z);
                    if hat.is_zero() {
                        continue;
                    }
                    assert_eq!(f.eval(&z).unwrap(), a.eval(&z) / hat);
                }
            }
        }
    }
}
