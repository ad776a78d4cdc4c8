//! Canonical forms of vertex- and edge-colored graphs by
//! individualization-refinement.
//!
//! Each search-tree node is an ordered partition of the vertices that is
//! refined to equitability (every vertex of a cell sees the same multiset of
//! (edge color, neighbour cell) pairs). Non-discrete partitions branch by
//! individualizing each vertex of a target cell. Each discrete leaf orders the
//! vertices, and the graph relabeled by that order is the leaf's certificate.
//! The canonical form is the smallest certificate. Automorphisms discovered
//! from equal certificates prune sibling branches in the same orbit.

/// Vertex-colored graph with colored (weighted) undirected edges; edge color 0
/// means "no edge".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    vertex_colors: Vec<u64>,
    adj: Vec<u64>,
}

impl ColoredGraph {
    pub fn new(vertex_colors: Vec<u64>) -> Self {
        let n = vertex_colors.len();
        ColoredGraph {
            n,
            vertex_colors,
            adj: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sets the color of the undirected edge `{u, v}`.
    pub fn set_edge(&mut self, u: usize, v: usize, color: u64) {
        self.adj[u * self.n + v] = color;
        self.adj[v * self.n + u] = color;
    }

    #[inline]
    pub fn edge(&self, u: usize, v: usize) -> u64 {
        self.adj[u * self.n + v]
    }

    pub fn vertex_color(&self, v: usize) -> u64 {
        self.vertex_colors[v]
    }

    /// Certificate of the graph relabeled so that `order[i]` becomes vertex `i`.
    fn certificate(&self, order: &[usize]) -> Vec<u64> {
        let mut out = Vec::with_capacity(1 + self.n + self.n * self.n.saturating_sub(1) / 2);
        out.push(self.n as u64);
        out.extend(order.iter().map(|&v| self.vertex_colors[v]));
        for (i, &u) in order.iter().enumerate() {
            for &v in &order[i + 1..] {
                out.push(self.edge(u, v));
            }
        }
        out
    }
}

/// Canonical form of a colored graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    /// Certificate of the canonically relabeled graph; equal iff isomorphic.
    pub certificate: Vec<u64>,
    /// `labeling[i]` is the original vertex placed at canonical position `i`.
    pub labeling: Vec<usize>,
    /// Automorphism generators found along the way (possibly incomplete).
    pub automorphisms: Vec<Vec<usize>>,
}

pub fn canonical_form(g: &ColoredGraph) -> Canonical {
    let n = g.n;
    if n == 0 {
        return Canonical {
            certificate: vec![0],
            labeling: Vec::new(),
            automorphisms: Vec::new(),
        };
    }
    let mut search = Search {
        g,
        scratch: Vec::with_capacity(n),
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let mut colors = initial_colors(g);
    search.refine(&mut colors);
    let mut prefix = Vec::new();
    search.descend(&colors, &mut prefix);
    let (certificate, order) = search.best.expect("search reaches at least one leaf");
    Canonical {
        certificate,
        labeling: order,
        automorphisms: search.generators,
    }
}

/// Colors are cell start positions: a vertex's color is the number of
/// vertices in strictly earlier cells.
fn initial_colors(g: &ColoredGraph) -> Vec<u32> {
    let mut sorted = g.vertex_colors.clone();
    sorted.sort_unstable();
    g.vertex_colors
        .iter()
        .map(|c| sorted.partition_point(|x| x < c) as u32)
        .collect()
}

#[inline]
fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn cell_count(colors: &[u32]) -> u32 {
    let mut seen = vec![false; colors.len()];
    let mut k = 0;
    for &c in colors {
        if !std::mem::replace(&mut seen[c as usize], true) {
            k += 1;
        }
    }
    k
}

enum Outcome {
    Continue,
    /// An automorphism mapped the first leaf here; unwind to this depth.
    JumpTo(usize),
}

struct Search<'a> {
    g: &'a ColoredGraph,
    scratch: Vec<(u32, u64, usize)>,
    first: Option<(Vec<u64>, Vec<usize>, Vec<usize>)>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Refines `colors` (cell start positions) until equitable. Each
    /// round sorts vertices by (cell, hashed neighbourhood signature); the hash
    /// is a symmetric function of label-invariant data, so collisions can only
    /// leave the partition coarser, never make it depend on labels.
    fn refine(&mut self, colors: &mut [u32]) {
        let n = self.g.n;
        let mut count = cell_count(colors);
        loop {
            if count as usize == n {
                return;
            }
            self.scratch.clear();
            for v in 0..n {
                let row = &self.g.adj[v * n..(v + 1) * n];
                let mut sig = 0u64;
                for (u, &e) in row.iter().enumerate() {
                    if e != 0 && u != v {
                        sig = sig.wrapping_add(mix(mix(e) ^ colors[u] as u64));
                    }
                }
                self.scratch.push((colors[v], sig, v));
            }
            self.scratch.sort_unstable_by_key(|&(c, s, _)| (c, s));
            let mut start = 0u32;
            let mut cells = 1u32;
            for i in 0..n {
                if i > 0 {
                    let (pc, ps, _) = self.scratch[i - 1];
                    let (c, s, _) = self.scratch[i];
                    if (pc, ps) != (c, s) {
                        start = i as u32;
                        cells += 1;
                    }
                }
                colors[self.scratch[i].2] = start;
            }
            if cells == count {
                return;
            }
            count = cells;
        }
    }

    /// First smallest non-singleton cell, as its color and member list.
    fn target_cell(colors: &[u32]) -> Option<(u32, Vec<usize>)> {
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in colors {
            sizes[c as usize] += 1;
        }
        let (color, _) = sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 1)
            .min_by_key(|&(c, &s)| (s, c))?;
        let members = (0..n).filter(|&v| colors[v] as usize == color).collect();
        Some((color as u32, members))
    }

    fn descend(&mut self, colors: &[u32], prefix: &mut Vec<usize>) -> Outcome {
        let Some((cell_color, cell)) = Self::target_cell(colors) else {
            return self.leaf(colors, prefix);
        };
        let depth = prefix.len();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, prefix) {
                continue;
            }
            // v keeps the cell start; the rest of the cell starts one later
            let mut child = colors.to_vec();
            for (x, c) in child.iter_mut().enumerate() {
                if *c == cell_color && x != v {
                    *c += 1;
                }
            }
            self.refine(&mut child);
            prefix.push(v);
            let out = self.descend(&child, prefix);
            prefix.pop();
            explored.push(v);
            if let Outcome::JumpTo(level) = out {
                if level < depth {
                    return out;
                }
            }
        }
        Outcome::Continue
    }

    fn leaf(&mut self, colors: &[u32], prefix: &[usize]) -> Outcome {
        let n = self.g.n;
        let mut order = vec![0usize; n];
        for v in 0..n {
            order[colors[v] as usize] = v;
        }
        let cert = self.g.certificate(&order);
        let Some((first_cert, first_order, first_prefix)) = &self.first else {
            self.first = Some((cert.clone(), order.clone(), prefix.to_vec()));
            self.best = Some((cert, order));
            return Outcome::Continue;
        };
        if cert == *first_cert {
            let gamma = Self::mapping(first_order, &order);
            let level = first_prefix.iter().zip(prefix).take_while(|(a, b)| a == b).count();
            self.generators.push(gamma);
            return Outcome::JumpTo(level);
        }
        let (best_cert, best_order) = self.best.as_ref().unwrap();
        match cert.cmp(best_cert) {
            std::cmp::Ordering::Equal => {
                let gamma = Self::mapping(best_order, &order);
                self.generators.push(gamma);
            }
            std::cmp::Ordering::Less => self.best = Some((cert, order)),
            std::cmp::Ordering::Greater => {}
        }
        Outcome::Continue
    }

    /// Permutation sending `from[i]` to `to[i]`.
    fn mapping(from: &[usize], to: &[usize]) -> Vec<usize> {
        let mut gamma = vec![0usize; from.len()];
        for (&a, &b) in from.iter().zip(to) {
            gamma[a] = b;
        }
        gamma
    }

    /// Whether `v` shares an orbit with an explored sibling under the
    /// generators that fix `prefix` pointwise.
    fn in_explored_orbit(&self, v: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.generators {
            if prefix.iter().any(|&x| gamma[x] != x) {
                continue;
            }
            any = true;
            for (x, &y) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }
}
