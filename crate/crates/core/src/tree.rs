//! Rooted combinatorial trees: construction, degrees, subtree splitting,
//! enumeration and AHU canonical codes.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`enumerate_rooted_trees`].
pub const MAX_ENUM_P: usize = 12;

/// A tree on vertices `0..p` with a distinguished root. Edges are oriented
/// away from the root; children of every vertex are kept in increasing id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    adj: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

/// AHU encoding of a rooted tree: a balanced string over `(` and `)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode(pub String);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One of the `d(v0)` branches hanging off the root.
///
/// `whole` is the root together with the branch edge and everything below the
/// child; `hat` is the part below the root with the root and its edge removed,
/// rooted at the child. `hat_degrees[v]` is the degree of hat vertex `v` in the
/// original tree, which differs from its degree in `hat` only at the hat root.
#[derive(Clone, Debug)]
pub struct RootSubtree {
    pub whole: RootedTree,
    pub hat: RootedTree,
    pub hat_degrees: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    p: usize,
    root: usize,
    edges: Vec<[usize; 2]>,
}

impl RootedTree {
    pub fn from_edge_list(p: usize, root: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if p == 0 || root >= p {
            return Err(Error::BadVertexId);
        }
        if edges.iter().any(|&(u, v)| u >= p || v >= p) {
            return Err(Error::BadVertexId);
        }
        if edges.len() != p - 1 || edges.iter().any(|&(u, v)| u == v) {
            return Err(Error::NotATree);
        }
        let mut adj = vec![Vec::new(); p];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NotATree);
            }
        }
        let mut parent = vec![None; p];
        let mut children = vec![Vec::new(); p];
        let mut seen = vec![false; p];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    children[u].push(v);
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotATree);
        }
        Ok(RootedTree {
            root,
            adj,
            parent,
            children,
        })
    }

    pub fn single_vertex() -> Self {
        RootedTree {
            root: 0,
            adj: vec![Vec::new()],
            parent: vec![None],
            children: vec![Vec::new()],
        }
    }

    /// New root whose children are the roots of `subtrees`, in order.
    pub fn graft(subtrees: &[RootedTree]) -> Self {
        let p = 1 + subtrees.iter().map(|t| t.p()).sum::<usize>();
        let mut edges = Vec::with_capacity(p - 1);
        let mut offset = 1;
        for t in subtrees {
            edges.push((0, offset + t.root));
            edges.extend(t.edges().into_iter().map(|(u, v)| (u + offset, v + offset)));
            offset += t.p();
        }
        RootedTree::from_edge_list(p, 0, &edges).expect("grafting trees yields a tree")
    }

    /// Rebuild a tree from its AHU code.
    pub fn from_code(code: &str) -> Result<Self> {
        let bytes = code.as_bytes();
        if bytes.first() != Some(&b'(') {
            return Err(Error::Parse(format!("bad tree code {code:?}")));
        }
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0usize;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => {
                    if i > 0 && stack.is_empty() {
                        return Err(Error::Parse(format!("bad tree code {code:?}")));
                    }
                    if let Some(&top) = stack.last() {
                        edges.push((top, next));
                    }
                    stack.push(next);
                    next += 1;
                }
                b')' => {
                    if stack.pop().is_none() {
                        return Err(Error::Parse(format!("bad tree code {code:?}")));
                    }
                }
                _ => return Err(Error::Parse(format!("bad tree code {code:?}"))),
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse(format!("bad tree code {code:?}")));
        }
        RootedTree::from_edge_list(next, 0, &edges)
    }

    pub fn p(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges, always `p - 1`.
    pub fn g(&self) -> usize {
        self.p() - 1
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn is_pendant(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.p())
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices in breadth-first order from the root, children in stored order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.p());
        order.push(self.root);
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            order.extend_from_slice(&self.children[u]);
            i += 1;
        }
        order
    }

    /// Depth of the deepest vertex (0 for a single vertex).
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.p()];
        let mut best = 0;
        for v in self.bfs_order() {
            if let Some(u) = self.parent[v] {
                depth[v] = depth[u] + 1;
                best = best.max(depth[v]);
            }
        }
        best
    }

    fn subtree_vertices(&self, top: usize) -> Vec<usize> {
        let mut out = vec![top];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            out.extend_from_slice(&self.children[u]);
            i += 1;
        }
        out
    }

    /// The tree hanging below `v`, rooted at `v`, with its vertices relabelled
    /// in breadth-first order. Also returns the original ids of the new labels.
    pub fn subtree_at(&self, v: usize) -> (RootedTree, Vec<usize>) {
        let verts = self.subtree_vertices(v);
        let index: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let edges: Vec<_> = verts[1..]
            .iter()
            .map(|&u| (index[&self.parent[u].unwrap()], index[&u]))
            .collect();
        let t = RootedTree::from_edge_list(verts.len(), 0, &edges).expect("subtree of a tree");
        (t, verts)
    }

    pub fn root_subtrees(&self) -> Result<Vec<RootSubtree>> {
        if self.p() == 1 {
            return Err(Error::SingleVertex);
        }
        Ok(self.children[self.root]
            .iter()
            .map(|&child| {
                let (hat, verts) = self.subtree_at(child);
                let hat_degrees = verts.iter().map(|&u| self.degree(u)).collect();
                let whole = RootedTree::graft(std::slice::from_ref(&hat));
                RootSubtree {
                    whole,
                    hat,
                    hat_degrees,
                }
            })
            .collect())
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        CanonicalCode(self.code_at(self.root))
    }

    fn code_at(&self, v: usize) -> String {
        let mut parts: Vec<String> = self.children[v].iter().map(|&c| self.code_at(c)).collect();
        parts.sort_unstable();
        let mut s = String::with_capacity(2 * self.p());
        s.push('(');
        for part in parts {
            s.push_str(&part);
        }
        s.push(')');
        s
    }

    /// Canonical representative: root 0, vertices numbered breadth-first with
    /// children ordered by their codes.
    pub fn canonical_form(&self) -> RootedTree {
        RootedTree::from_code(&self.canonical_code().0).expect("codes always parse")
    }

    pub fn is_isomorphic(&self, other: &RootedTree) -> bool {
        self.p() == other.p() && self.canonical_code() == other.canonical_code()
    }

    /// Same tree with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<RootedTree> {
        if perm.len() != self.p() {
            return Err(Error::BadVertexId);
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        RootedTree::from_edge_list(self.p(), perm[self.root], &edges)
    }

    /// Tree rooted at `v` instead.
    pub fn reroot(&self, v: usize) -> Result<RootedTree> {
        if v >= self.p() {
            return Err(Error::BadVertexId);
        }
        RootedTree::from_edge_list(self.p(), v, &self.edges())
    }

    pub fn to_json(&self) -> String {
        let j = TreeJson {
            p: self.p(),
            root: self.root,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&j).expect("tree serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TreeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_parts(j)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let j: TreeJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_parts(j)
    }

    fn from_json_parts(j: TreeJson) -> Result<Self> {
        let edges: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        RootedTree::from_edge_list(j.p, j.root, &edges)
    }
}

/// One representative per rooted-isomorphism class on `p` vertices, in
/// canonical form and sorted by canonical code.
pub fn enumerate_rooted_trees(p: usize) -> Result<Vec<RootedTree>> {
    if p == 0 || p > MAX_ENUM_P {
        return Err(Error::POutOfRange);
    }
    let mut level: BTreeMap<CanonicalCode, RootedTree> = BTreeMap::new();
    let t = RootedTree::single_vertex();
    level.insert(t.canonical_code(), t);
    for n in 2..=p {
        let mut next = BTreeMap::new();
        for t in level.values() {
            let mut edges = t.edges();
            for v in 0..t.p() {
                edges.push((v, n - 1));
                let grown = RootedTree::from_edge_list(n, t.root(), &edges).expect("leaf attach");
                edges.pop();
                next.entry(grown.canonical_code()).or_insert_with(|| grown.canonical_form());
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}
