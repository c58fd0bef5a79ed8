use super::ExplicitGraph;

/// Search-node limit used when callers have no better idea.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentSet {
    pub size: usize,
    pub vertices: Vec<usize>,
    /// `false` if the node budget ran out: `size` is then only a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

type Bits = Vec<u64>;

fn ones(bits: &Bits) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

fn first(bits: &Bits) -> Option<usize> {
    bits.iter()
        .position(|&w| w != 0)
        .map(|i| i * 64 + bits[i].trailing_zeros() as usize)
}

fn count(bits: &Bits) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

fn and_count(a: &Bits, b: &Bits) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn clear(bits: &mut Bits, v: usize) {
    bits[v / 64] &= !(1 << (v % 64));
}

struct Search<'a> {
    adj: &'a [Bits],
    budget: u64,
    nodes: u64,
    best: Vec<usize>,
    current: Vec<usize>,
    aborted: bool,
}

impl Search<'_> {
    /// Greedy partition of `p` into cliques; its size bounds α on `p`.
    fn clique_cover(&self, p: &Bits) -> usize {
        let mut left = p.clone();
        let mut cliques = 0;
        while let Some(v) = first(&left) {
            clear(&mut left, v);
            let mut cand: Bits = left.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            while let Some(u) = first(&cand) {
                clear(&mut left, u);
                for (c, a) in cand.iter_mut().zip(&self.adj[u]) {
                    *c &= a;
                }
            }
            cliques += 1;
        }
        cliques
    }

    fn take(&mut self, p: &Bits, v: usize) -> Bits {
        let mut next: Bits = p.iter().zip(&self.adj[v]).map(|(a, b)| a & !b).collect();
        clear(&mut next, v);
        next
    }

    fn run(&mut self, p: Bits) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if count(&p) == 0 {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        }
        if self.current.len() + self.clique_cover(&p) <= self.best.len() {
            return;
        }
        // Degree within p; lowest index wins ties.
        let mut min_v = (usize::MAX, 0);
        let mut max_v = (0, 0);
        for v in ones(&p) {
            let d = and_count(&self.adj[v], &p);
            if d < min_v.0 {
                min_v = (d, v);
            }
            if d > max_v.0 {
                max_v = (d, v);
            }
        }
        if min_v.0 <= 1 {
            // Some maximum independent set contains a vertex of degree ≤ 1.
            let v = min_v.1;
            let next = self.take(&p, v);
            self.current.push(v);
            self.run(next);
            self.current.pop();
            return;
        }
        let v = max_v.1;
        let next = self.take(&p, v);
        self.current.push(v);
        self.run(next);
        self.current.pop();
        let mut rest = p;
        clear(&mut rest, v);
        self.run(rest);
    }
}

/// Repeatedly takes a minimum-degree vertex; the starting incumbent.
fn greedy(g: &ExplicitGraph) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut out = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (deg[v], v)) {
        out.push(v);
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                alive[u] = false;
                for &w in g.neighbors(u) {
                    deg[w] = deg[w].saturating_sub(1);
                }
            }
        }
    }
    out
}

/// Branch and bound on the highest-degree vertex with a greedy clique-cover
/// bound. Deterministic for a given graph and budget.
pub fn max_independent_set(g: &ExplicitGraph, budget: u64) -> IndependentSet {
    let n = g.n();
    let words = n.div_ceil(64);
    let adj: Vec<Bits> = (0..n)
        .map(|v| {
            let mut b = vec![0u64; words];
            for &u in g.neighbors(v) {
                b[u / 64] |= 1 << (u % 64);
            }
            b
        })
        .collect();
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut s = Search {
        adj: &adj,
        budget,
        nodes: 0,
        best: greedy(g),
        current: Vec::new(),
        aborted: false,
    };
    s.run(all);
    let mut vertices = s.best;
    vertices.sort_unstable();
    IndependentSet {
        size: vertices.len(),
        vertices,
        exact: !s.aborted,
        nodes: s.nodes,
    }
}
