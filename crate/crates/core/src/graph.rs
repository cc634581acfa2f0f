//! Small undirected simple graphs on vertex indices `0..n`.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
    nbrs: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![vec![false; n]; n], nbrs: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b || self.adj[a][b] {
            return;
        }
        self.adj[a][b] = true;
        self.adj[b][a] = true;
        let pa = self.nbrs[a].binary_search(&b).unwrap_err();
        self.nbrs[a].insert(pa, b);
        let pb = self.nbrs[b].binary_search(&a).unwrap_err();
        self.nbrs[b].insert(pb, a);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Neighbours of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for &b in &self.nbrs[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All maximal cliques, each sorted, in lexicographic order (Bron–Kerbosch with pivoting).
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let p: Vec<usize> = (0..self.n()).collect();
        self.bron_kerbosch(&mut Vec::new(), p, Vec::new(), &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = p.iter().chain(x.iter()).copied().max_by_key(|&u| p.iter().filter(|&&w| self.adj[u][w]).count()).unwrap();
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !self.adj[pivot][v]).collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let np: Vec<usize> = p.iter().copied().filter(|&w| self.adj[v][w]).collect();
            let nx: Vec<usize> = x.iter().copied().filter(|&w| self.adj[v][w]).collect();
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }

    /// A maximum clique (lexicographically first among the largest maximal cliques).
    pub fn maximum_clique(&self) -> Vec<usize> {
        self.maximal_cliques().into_iter().fold(Vec::new(), |best, c| if c.len() > best.len() { c } else { best })
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.nbrs[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}
