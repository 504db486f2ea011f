//! Sparse suffix tree with comparison-frugal insertion.
//!
//! Suffixes are inserted one at a time. The descent follows heavy paths:
//! entering a path costs one LCE against a stored representative leaf plus
//! one predecessor query on the path's string-depth structure; leaving a
//! path probes the children largest-subtree-first, one first-character
//! comparison each. Heavy paths are maintained with a lazy rebuilding
//! scheme: each path root counts insertions into its subtree and the
//! decomposition below it is rebuilt once they reach a sixth of its leaf
//! count, which keeps `L(end) >= (2/3) L(root)` for every path.
//!
//! Every suffix is conceptually terminated by a unique symbol: positions
//! beyond the window compare unequal to everything without consulting the
//! oracle.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::oracle::{EqString, Pos};
use crate::Error;

const NONE: usize = usize::MAX;

// rebuild a path's subtree when 6 * insertions >= stored leaf count
const REBUILD_NUM: usize = 6;

pub struct SparseSuffixTree {
    window_end: Pos,
    root: usize,
    nodes: Vec<Node>,
    paths: Vec<HeavyPath>,
    leaf_by_sample: HashMap<Pos, usize>,
    samples: Vec<Pos>,
    pub stats: BuildStats,
}

struct Node {
    parent: usize,
    /// First label position of the incoming edge; positions > window_end
    /// stand for the terminator.
    edge_start: Pos,
    edge_len: usize,
    /// String depth including the incoming edge (terminator included on leaves).
    depth: usize,
    children: Vec<usize>,
    sample: Option<Pos>,
    /// Subtree leaf count; stale between rebuilds.
    leaves: usize,
    path: usize,
    /// Next node on the same heavy path, NONE at the path end.
    path_next: usize,
}

struct HeavyPath {
    root: usize,
    // read by the debug-build invariant checks
    #[cfg_attr(not(debug_assertions), allow(dead_code))]
    end: usize,
    /// Sample of one leaf in the subtree of `end`.
    rep_sample: Pos,
    /// string depth -> node, for the explicit nodes on the path
    pred: BTreeMap<usize, usize>,
    insertions: usize,
}

#[derive(Clone, Debug, Default)]
pub struct BuildStats {
    /// Maximum real-symbol degree seen (terminator edges not counted).
    pub max_degree: usize,
    /// Heavy paths entered, per insertion.
    pub path_crossings: Vec<usize>,
    pub rebuilds: usize,
}

pub enum SstBuild {
    Built(SparseSuffixTree),
    /// Some node's real-symbol degree exceeded the cap.
    CapExceeded,
    /// The negative-comparison budget was exhausted (internal builds only).
    BudgetExceeded,
}

/// Builds the sparse suffix tree of the suffixes `T[i..window_end]` for the
/// given distinct sample positions. With `sigma_cap = Some(c)`, aborts as
/// soon as any node has `c + 1` children over real symbols.
pub fn build_sparse(
    s: &mut EqString,
    samples: &[Pos],
    window_end: Pos,
    sigma_cap: Option<usize>,
) -> Result<SstBuild, Error> {
    build_sparse_limited(s, samples, window_end, sigma_cap, None)
}

pub(crate) fn build_sparse_limited(
    s: &mut EqString,
    samples: &[Pos],
    window_end: Pos,
    sigma_cap: Option<usize>,
    negative_budget: Option<u64>,
) -> Result<SstBuild, Error> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if window_end > s.len() {
        return Err(Error::param("window_end", "beyond string end"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateSample(w[0]));
        }
    }
    if sorted[0] < 1 || *sorted.last().unwrap() > window_end {
        return Err(Error::param(
            "samples",
            "positions must lie in [1, window_end]",
        ));
    }

    let neg_start = s.stats().negative;
    let mut tree = SparseSuffixTree {
        window_end,
        root: 0,
        nodes: Vec::new(),
        paths: Vec::new(),
        leaf_by_sample: HashMap::new(),
        samples: samples.to_vec(),
        stats: BuildStats::default(),
    };
    tree.nodes.push(Node {
        parent: NONE,
        edge_start: 0,
        edge_len: 0,
        depth: 0,
        children: Vec::new(),
        sample: None,
        leaves: 0,
        path: 0,
        path_next: NONE,
    });
    tree.paths.push(HeavyPath {
        root: 0,
        end: 0,
        rep_sample: samples[0],
        pred: BTreeMap::from([(0, 0)]),
        insertions: 0,
    });

    for &sample in samples {
        if let Some(budget) = negative_budget {
            if s.stats().negative - neg_start > budget {
                return Ok(SstBuild::BudgetExceeded);
            }
        }
        if !tree.insert(s, sample, sigma_cap) {
            return Ok(SstBuild::CapExceeded);
        }
    }
    if let Some(budget) = negative_budget {
        if s.stats().negative - neg_start > budget {
            return Ok(SstBuild::BudgetExceeded);
        }
    }
    Ok(SstBuild::Built(tree))
}

impl SparseSuffixTree {
    pub fn window_end(&self) -> Pos {
        self.window_end
    }

    pub fn samples(&self) -> &[Pos] {
        &self.samples
    }

    /// Symbol equality with the virtual terminator: positions beyond the
    /// window match only themselves and cost no oracle call.
    fn sym_eq(&self, s: &mut EqString, i: Pos, j: Pos) -> bool {
        if i > self.window_end || j > self.window_end {
            i == j
        } else {
            s.eq(i, j)
        }
    }

    /// LCE of the terminated suffixes starting at `a` and `b`.
    fn suffix_lce(&self, s: &mut EqString, a: Pos, b: Pos) -> usize {
        if a == b {
            return self.window_end - a + 2;
        }
        let mut k = 0;
        while self.sym_eq(s, a + k, b + k) {
            k += 1;
        }
        k
    }

    fn suffix_len(&self, sample: Pos) -> usize {
        self.window_end - sample + 2 // terminator included
    }

    fn real_degree(&self, v: usize) -> usize {
        self.nodes[v]
            .children
            .iter()
            .filter(|&&c| self.nodes[c].edge_start <= self.window_end)
            .count()
    }

    /// Inserts one suffix; false means the degree cap was exceeded.
    fn insert(&mut self, s: &mut EqString, sample: Pos, sigma_cap: Option<usize>) -> bool {
        let suffix_len = self.suffix_len(sample);
        let mut crossings = 0usize;

        // first leaf hangs directly off the root
        if self.nodes[self.root].children.is_empty() {
            let leaf = self.new_leaf(sample, self.root, sample, suffix_len);
            self.nodes[self.root].children.push(leaf);
            self.paths[self.nodes[self.root].path].rep_sample = sample;
            self.leaf_by_sample.insert(sample, leaf);
            self.stats.path_crossings.push(0);
            self.finish_insert(leaf);
            return true;
        }

        let mut current = self.root;
        let attached = loop {
            crossings += 1;
            let p = self.nodes[current].path;
            let rep = self.paths[p].rep_sample;
            let l = self.suffix_lce(s, sample, rep);
            debug_assert!(l < self.suffix_len(sample), "duplicate suffix");

            let pred_hit = self.paths[p].pred.range(..=l).next_back().map(|(_, &v)| v);
            match pred_hit {
                None => {
                    // diverged inside the incoming edge of the path root
                    let root = self.paths[p].root;
                    debug_assert_eq!(current, root);
                    debug_assert!(l < self.nodes[root].depth);
                    let w = self.split_edge(root, l);
                    break self.attach_leaf(w, sample, suffix_len);
                }
                Some(v) => {
                    let vdepth = self.nodes[v].depth;
                    debug_assert!(vdepth <= l);
                    let nxt = self.nodes[v].path_next;
                    if vdepth < l && nxt != NONE {
                        // diverged inside a path edge below v
                        debug_assert!(l < self.nodes[nxt].depth);
                        let w = self.split_edge(nxt, l);
                        break self.attach_leaf(w, sample, suffix_len);
                    }
                    // continue at v: probe children, excluding the path
                    // successor when the divergence is exactly at v
                    let exclude = if vdepth == l { nxt } else { NONE };
                    let next_pos = sample + self.nodes[v].depth;
                    match self.probe_children(s, v, next_pos, exclude) {
                        Some(child) => current = child,
                        None => break self.attach_leaf(v, sample, suffix_len),
                    }
                }
            }
        };

        self.leaf_by_sample.insert(sample, attached);
        self.stats.path_crossings.push(crossings);

        let parent = self.nodes[attached].parent;
        let mut deg = self.real_degree(parent);
        let grand = self.nodes[parent].parent;
        if grand != NONE {
            deg = deg.max(self.real_degree(grand));
        }
        self.stats.max_degree = self.stats.max_degree.max(deg);
        if let Some(cap) = sigma_cap {
            if deg > cap {
                return false;
            }
        }

        self.finish_insert(attached);
        true
    }

    /// Largest-subtree child first, then the rest by descending stored leaf
    /// count with ties broken by edge first-position.
    fn probe_children(
        &mut self,
        s: &mut EqString,
        v: usize,
        next_pos: Pos,
        exclude: usize,
    ) -> Option<usize> {
        let mut order: Vec<usize> = self.nodes[v]
            .children
            .iter()
            .copied()
            .filter(|&c| c != exclude)
            .collect();
        order.sort_by(|&a, &b| {
            self.nodes[b]
                .leaves
                .cmp(&self.nodes[a].leaves)
                .then(self.nodes[a].edge_start.cmp(&self.nodes[b].edge_start))
        });
        order
            .into_iter()
            .find(|&c| self.sym_eq(s, next_pos, self.nodes[c].edge_start))
    }

    /// Splits the incoming edge of `below` at string depth `at_depth`,
    /// returning the new explicit node, which joins `below`'s path.
    fn split_edge(&mut self, below: usize, at_depth: usize) -> usize {
        let parent = self.nodes[below].parent;
        debug_assert!(at_depth > self.nodes[parent].depth && at_depth < self.nodes[below].depth);
        let offset = at_depth - self.nodes[parent].depth;
        let w = self.nodes.len();
        let below_path = self.nodes[below].path;
        self.nodes.push(Node {
            parent,
            edge_start: self.nodes[below].edge_start,
            edge_len: offset,
            depth: at_depth,
            children: vec![below],
            sample: None,
            leaves: self.nodes[below].leaves,
            path: below_path,
            path_next: below,
        });
        let pos = self.nodes[parent]
            .children
            .iter()
            .position(|&c| c == below)
            .expect("child link");
        self.nodes[parent].children[pos] = w;
        self.nodes[below].parent = w;
        self.nodes[below].edge_start += offset;
        self.nodes[below].edge_len -= offset;
        if self.paths[below_path].root == below {
            self.paths[below_path].root = w;
        } else if let Some((_, &prev)) = self.paths[below_path].pred.range(..at_depth).next_back() {
            debug_assert_eq!(self.nodes[prev].path_next, below);
            self.nodes[prev].path_next = w;
        }
        self.paths[below_path].pred.insert(at_depth, w);
        w
    }

    fn new_leaf(&mut self, sample: Pos, parent: usize, edge_start: Pos, depth: usize) -> usize {
        let leaf = self.nodes.len();
        let path = self.paths.len();
        self.nodes.push(Node {
            parent,
            edge_start,
            edge_len: depth - self.nodes[parent].depth,
            depth,
            children: Vec::new(),
            sample: Some(sample),
            leaves: 1,
            path,
            path_next: NONE,
        });
        self.paths.push(HeavyPath {
            root: leaf,
            end: leaf,
            rep_sample: sample,
            pred: BTreeMap::from([(depth, leaf)]),
            insertions: 0,
        });
        leaf
    }

    fn attach_leaf(&mut self, at: usize, sample: Pos, suffix_len: usize) -> usize {
        let edge_start = sample + self.nodes[at].depth;
        let leaf = self.new_leaf(sample, at, edge_start, suffix_len);
        self.nodes[at].children.push(leaf);
        leaf
    }

    /// Insertion-counter updates and lazy rebuilding along the new leaf's
    /// root path.
    fn finish_insert(&mut self, leaf: usize) {
        let mut chain = Vec::new();
        let mut v = leaf;
        while v != NONE {
            chain.push(v);
            v = self.nodes[v].parent;
        }
        let mut rebuild_at = NONE;
        for &u in chain.iter().rev() {
            let p = self.nodes[u].path;
            if self.paths[p].root == u {
                self.paths[p].insertions += 1;
                if rebuild_at == NONE && REBUILD_NUM * self.paths[p].insertions >= self.nodes[u].leaves
                {
                    rebuild_at = u;
                }
            }
        }
        if rebuild_at != NONE {
            self.rebuild(rebuild_at);
        }
        #[cfg(debug_assertions)]
        self.debug_check_heavy_invariant();
    }

    /// Recomputes true leaf counts under `r` and rebuilds its heavy-path
    /// decomposition and predecessor structures.
    fn rebuild(&mut self, r: usize) {
        self.stats.rebuilds += 1;
        self.recount_leaves(r);
        self.make_paths(r);
    }

    fn recount_leaves(&mut self, v: usize) -> usize {
        let children = self.nodes[v].children.clone();
        let mut total = usize::from(self.nodes[v].sample.is_some());
        for c in children {
            total += self.recount_leaves(c);
        }
        self.nodes[v].leaves = total;
        total
    }

    fn make_paths(&mut self, start: usize) {
        let path_id = self.paths.len();
        let root_leaves = self.nodes[start].leaves;
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            let next = self.nodes[cur]
                .children
                .iter()
                .copied()
                .filter(|&c| 6 * self.nodes[c].leaves >= 5 * root_leaves)
                .max_by(|&a, &b| {
                    self.nodes[a]
                        .leaves
                        .cmp(&self.nodes[b].leaves)
                        .then(self.nodes[b].edge_start.cmp(&self.nodes[a].edge_start))
                });
            match next {
                Some(c) => {
                    chain.push(c);
                    cur = c;
                }
                None => break,
            }
        }
        let end = *chain.last().unwrap();
        for w in chain.windows(2) {
            self.nodes[w[0]].path_next = w[1];
        }
        self.nodes[end].path_next = NONE;
        let mut pred = BTreeMap::new();
        for &u in &chain {
            self.nodes[u].path = path_id;
            pred.insert(self.nodes[u].depth, u);
        }
        self.paths.push(HeavyPath {
            root: start,
            end,
            rep_sample: self.any_leaf_sample(end),
            pred,
            insertions: 0,
        });
        for &u in &chain {
            let kids = self.nodes[u].children.clone();
            for c in kids {
                if self.nodes[c].path != path_id {
                    self.make_paths(c);
                }
            }
        }
    }

    fn any_leaf_sample(&self, mut v: usize) -> Pos {
        loop {
            if let Some(sample) = self.nodes[v].sample {
                return sample;
            }
            v = self.nodes[v].children[0];
        }
    }

    #[cfg(debug_assertions)]
    fn debug_check_heavy_invariant(&self) {
        if self.leaf_by_sample.len() > 4096 {
            return;
        }
        fn walk(t: &SparseSuffixTree, v: usize, counts: &mut [usize]) -> usize {
            let mut total = usize::from(t.nodes[v].sample.is_some());
            for &c in &t.nodes[v].children {
                total += walk(t, c, counts);
            }
            counts[v] = total;
            total
        }
        let mut counts = vec![0usize; self.nodes.len()];
        walk(self, self.root, &mut counts);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            stack.extend(self.nodes[v].children.iter().copied());
            let p = self.nodes[v].path;
            if self.paths[p].root == v {
                let end = self.paths[p].end;
                assert!(
                    3 * counts[end] >= 2 * counts[v],
                    "heavy-path invariant violated: L(end)={} L(root)={}",
                    counts[end],
                    counts[v]
                );
            }
        }
    }

    /// LCE of two sampled suffixes, read off the tree with no comparisons.
    pub fn tree_lce(&self, i: Pos, j: Pos) -> usize {
        let li = *self
            .leaf_by_sample
            .get(&i)
            .unwrap_or_else(|| panic!("{i} is not a sample position"));
        if i == j {
            return self.window_end - i + 1;
        }
        let lj = *self
            .leaf_by_sample
            .get(&j)
            .unwrap_or_else(|| panic!("{j} is not a sample position"));
        self.nodes[self.lca(li, lj)].depth
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        let chain_of = |mut v: usize| {
            let mut chain = Vec::new();
            while v != NONE {
                chain.push(v);
                v = self.nodes[v].parent;
            }
            chain.reverse();
            chain
        };
        let (ca, cb) = (chain_of(a), chain_of(b));
        let mut lca = self.root;
        for (x, y) in ca.iter().zip(cb.iter()) {
            if x == y {
                lca = *x;
            } else {
                break;
            }
        }
        lca
    }

    /// For each sample after the first (in increasing position order): an
    /// earlier sample maximizing the LCE, and that LCE. Root-to-leaf label
    /// propagation; no comparisons.
    pub fn src_len_labels(&self) -> Vec<SrcLen> {
        let mut order = self.samples.clone();
        order.sort_unstable();
        let mut label: Vec<usize> = vec![NONE; self.nodes.len()];
        let mut out = Vec::with_capacity(order.len().saturating_sub(1));
        for (k, &sample) in order.iter().enumerate() {
            let mut v = self.leaf_by_sample[&sample];
            while v != NONE && label[v] == NONE {
                label[v] = k;
                v = self.nodes[v].parent;
            }
            if k > 0 {
                debug_assert!(v != NONE, "root is labelled after the first sample");
                out.push(SrcLen {
                    sample,
                    src: order[label[v]],
                    len: self.nodes[v].depth,
                });
            }
        }
        out
    }

    /// Compacted-trie structural checks; sibling edge symbols tested through
    /// the oracle. Test helper.
    pub fn validate_structure(&self, s: &mut EqString) {
        for v in 0..self.nodes.len() {
            if v != self.root && self.nodes[v].sample.is_none() {
                assert!(
                    self.nodes[v].children.len() >= 2,
                    "non-branching internal node {v}"
                );
            }
            let children = self.nodes[v].children.clone();
            for (ai, &a) in children.iter().enumerate() {
                for &b in children.iter().skip(ai + 1) {
                    let (pa, pb) = (self.nodes[a].edge_start, self.nodes[b].edge_start);
                    assert!(
                        !self.sym_eq(s, pa, pb),
                        "sibling edges share a first symbol"
                    );
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrcLen {
    pub sample: Pos,
    pub src: Pos,
    pub len: usize,
}
