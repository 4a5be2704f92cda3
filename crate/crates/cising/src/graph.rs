//! Multigraph data model, weighted instances, and the line-oriented file
//! format. Self-loops and parallel edges are allowed; edge identity is the
//! position in the edge list so substitutions can target one parallel edge.

use crate::error::{CisingError, Result};
use crate::numerics::value::ComplexValue;
use crate::numerics::weightspec::WeightSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(CisingError::Parse(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// kappa(A): component count of (V, A) for an edge-index subset,
    /// isolated vertices included.
    pub fn kappa(&self, subset: &[usize]) -> usize {
        let mut dsu = Dsu::new(self.n);
        for &i in subset {
            let (u, v) = self.edges[i];
            dsu.union(u, v);
        }
        dsu.components()
    }

    /// kappa for a bitmask over edge indices (m <= 64).
    pub fn kappa_mask(&self, mask: u64) -> usize {
        let mut dsu = Dsu::new(self.n);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                dsu.union(u, v);
            }
        }
        dsu.components()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.kappa(&(0..self.m()).collect::<Vec<_>>()) == 1
    }

    /// k vertex-disjoint copies.
    pub fn disjoint_union(&self, k: usize) -> Result<Multigraph> {
        if k == 0 {
            return Err(CisingError::Domain("disjoint_union needs k >= 1".into()));
        }
        let mut edges = Vec::with_capacity(self.m() * k);
        for copy in 0..k {
            let off = copy * self.n;
            for &(u, v) in &self.edges {
                edges.push((u + off, v + off));
            }
        }
        Multigraph::new(self.n * k, edges)
    }

    /// Proper-2-coloring class sizes (a, b) per component, or None for a
    /// non-bipartite component. A self-loop makes its component
    /// non-bipartite.
    pub fn bipartition_class_sizes(&self) -> Vec<Option<(usize, usize)>> {
        let mut adj = vec![vec![]; self.n];
        let mut loops = vec![false; self.n];
        for &(u, v) in &self.edges {
            if u == v {
                loops[u] = true;
            } else {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut color = vec![usize::MAX; self.n];
        let mut out = vec![];
        for start in 0..self.n {
            if color[start] != usize::MAX {
                continue;
            }
            let mut ok = true;
            let mut sizes = [0usize; 2];
            let mut stack = vec![start];
            color[start] = 0;
            let mut members = vec![start];
            while let Some(v) = stack.pop() {
                if loops[v] {
                    ok = false;
                }
                for &w in &adj[v] {
                    if color[w] == usize::MAX {
                        color[w] = color[v] ^ 1;
                        members.push(w);
                        stack.push(w);
                    } else if color[w] == color[v] {
                        ok = false;
                    }
                }
            }
            if ok {
                for &v in &members {
                    sizes[color[v]] += 1;
                }
                out.push(Some((sizes[0], sizes[1])));
            } else {
                out.push(None);
            }
        }
        out
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
    count: usize,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), count: n }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.count -= 1;
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn components(&mut self) -> usize {
        self.count
    }
}

#[derive(Debug, Clone)]
pub struct IsingInstance {
    pub graph: Multigraph,
    pub phi: Vec<ComplexValue>,
    pub tau: Vec<ComplexValue>,
}

impl IsingInstance {
    pub fn uniform(graph: Multigraph, y: ComplexValue, lambda: ComplexValue) -> Self {
        let phi = vec![y; graph.m()];
        let tau = vec![lambda; graph.n()];
        IsingInstance { graph, phi, tau }
    }

    /// (y, lambda) when the instance is uniform; empty edge or vertex lists
    /// are vacuously uniform with weight 1.
    pub fn uniform_weights(&self) -> Option<(ComplexValue, ComplexValue)> {
        static ONE: std::sync::OnceLock<ComplexValue> = std::sync::OnceLock::new();
        let one = ONE.get_or_init(ComplexValue::one);
        let y = self.phi.first().unwrap_or(one);
        if !self.phi.iter().all(|w| w == y) {
            return None;
        }
        let l = self.tau.first().unwrap_or(one);
        if !self.tau.iter().all(|w| w == l) {
            return None;
        }
        Some((y.clone(), l.clone()))
    }
}

#[derive(Debug, Clone)]
pub struct RandomClusterInstance {
    pub graph: Multigraph,
    pub q: ComplexValue,
    pub gamma: Vec<ComplexValue>,
}

impl RandomClusterInstance {
    pub fn uniform(graph: Multigraph, q: ComplexValue, gamma: ComplexValue) -> Self {
        let gamma = vec![gamma; graph.m()];
        RandomClusterInstance { graph, q, gamma }
    }
}

#[derive(Debug, Clone)]
pub struct TuttePoint {
    pub x: ComplexValue,
    pub y: ComplexValue,
    /// q = (x-1)(y-1), maintained exactly.
    pub q: ComplexValue,
}

impl TuttePoint {
    pub fn new(x: ComplexValue, y: ComplexValue) -> Self {
        let one = ComplexValue::one();
        let q = x.sub(&one).mul(&y.sub(&one));
        TuttePoint { x, y, q }
    }
}

/// Parsed graph file: structure plus optional weight annotations. Weights
/// stay as specs so callers can decide fallbacks (e.g. a CLI --y flag).
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Multigraph,
    pub default_edge: Option<WeightSpec>,
    pub edge_weights: Vec<Option<WeightSpec>>,
    pub fields: Vec<Option<WeightSpec>>,
    pub terminals: Option<(usize, usize)>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile> {
        let mut n: Option<usize> = None;
        let mut default_edge = None;
        let mut edges = vec![];
        let mut edge_weights = vec![];
        let mut fields: Vec<Option<WeightSpec>> = vec![];
        let mut terminals = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| CisingError::Parse(format!("line {}: {msg}", lineno + 1));
            match toks[0].to_ascii_lowercase().as_str() {
                "graph" => {
                    if n.is_some() {
                        return Err(err("duplicate graph header".into()));
                    }
                    let count: usize = toks
                        .get(1)
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err("graph header needs a vertex count".into()))?;
                    if toks.len() == 4 && toks[2].eq_ignore_ascii_case("default_edge") {
                        default_edge = Some(WeightSpec::parse(toks[3])?);
                    } else if toks.len() != 2 {
                        return Err(err("expected `graph <n> [default_edge <w>]`".into()));
                    }
                    fields = vec![None; count];
                    n = Some(count);
                }
                "edge" => {
                    let nn = n.ok_or_else(|| err("edge before graph header".into()))?;
                    if toks.len() != 3 && toks.len() != 4 {
                        return Err(err("expected `edge <u> <v> [<w>]`".into()));
                    }
                    let u: usize = toks[1].parse().map_err(|_| err("bad vertex".into()))?;
                    let v: usize = toks[2].parse().map_err(|_| err("bad vertex".into()))?;
                    if u >= nn || v >= nn {
                        return Err(err(format!("endpoint out of range (n = {nn})")));
                    }
                    edges.push((u, v));
                    edge_weights.push(if toks.len() == 4 {
                        Some(WeightSpec::parse(toks[3])?)
                    } else {
                        None
                    });
                }
                "field" => {
                    let nn = n.ok_or_else(|| err("field before graph header".into()))?;
                    if toks.len() != 3 {
                        return Err(err("expected `field <v> <w>`".into()));
                    }
                    let v: usize = toks[1].parse().map_err(|_| err("bad vertex".into()))?;
                    if v >= nn {
                        return Err(err(format!("vertex out of range (n = {nn})")));
                    }
                    if fields[v].is_some() {
                        return Err(err(format!("duplicate field line for vertex {v}")));
                    }
                    fields[v] = Some(WeightSpec::parse(toks[2])?);
                }
                "terminals" => {
                    let nn = n.ok_or_else(|| err("terminals before graph header".into()))?;
                    if toks.len() != 3 {
                        return Err(err("expected `terminals <s> <t>`".into()));
                    }
                    let s: usize = toks[1].parse().map_err(|_| err("bad vertex".into()))?;
                    let t: usize = toks[2].parse().map_err(|_| err("bad vertex".into()))?;
                    if s >= nn || t >= nn {
                        return Err(err(format!("terminal out of range (n = {nn})")));
                    }
                    terminals = Some((s, t));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| CisingError::Parse("missing graph header".into()))?;
        Ok(GraphFile {
            graph: Multigraph::new(n, edges)?,
            default_edge,
            edge_weights,
            fields,
            terminals,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        match &self.default_edge {
            Some(w) => out.push_str(&format!("graph {} default_edge {w}\n", self.graph.n())),
            None => out.push_str(&format!("graph {}\n", self.graph.n())),
        }
        for (i, &(u, v)) in self.graph.edges().iter().enumerate() {
            match &self.edge_weights[i] {
                Some(w) => out.push_str(&format!("edge {u} {v} {w}\n")),
                None => out.push_str(&format!("edge {u} {v}\n")),
            }
        }
        for (v, f) in self.fields.iter().enumerate() {
            if let Some(w) = f {
                out.push_str(&format!("field {v} {w}\n"));
            }
        }
        if let Some((s, t)) = self.terminals {
            out.push_str(&format!("terminals {s} {t}\n"));
        }
        out
    }

    /// Resolve per-edge and per-vertex weights into an instance.
    /// Priority: explicit edge weight, then the file's default, then the
    /// caller's fallback.
    pub fn to_ising(
        &self,
        fallback_y: Option<&ComplexValue>,
        fallback_lambda: Option<&ComplexValue>,
    ) -> Result<IsingInstance> {
        let mut phi = Vec::with_capacity(self.graph.m());
        for (i, w) in self.edge_weights.iter().enumerate() {
            let v = match (w, &self.default_edge, fallback_y) {
                (Some(w), _, _) => w.to_value(),
                (None, Some(d), _) => d.to_value(),
                (None, None, Some(y)) => y.clone(),
                (None, None, None) => {
                    return Err(CisingError::Parse(format!(
                        "edge {i} has no weight and no default is available"
                    )))
                }
            };
            phi.push(v);
        }
        let one = ComplexValue::one();
        let tau = self
            .fields
            .iter()
            .map(|f| match f {
                Some(w) => w.to_value(),
                None => fallback_lambda.cloned().unwrap_or_else(|| one.clone()),
            })
            .collect();
        Ok(IsingInstance { graph: self.graph.clone(), phi, tau })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let g = triangle();
        assert_eq!(g.kappa(&[]), 3);
        assert_eq!(g.kappa(&[0, 1, 2]), 1);
        assert_eq!(g.kappa(&[0]), 2);
    }

    #[test]
    fn kappa_monotone_under_edge_addition() {
        let g = triangle();
        let mut prev = g.kappa(&[]);
        let mut subset = vec![];
        for i in 0..g.m() {
            subset.push(i);
            let k = g.kappa(&subset);
            assert!(k <= prev && k + 1 >= prev);
            prev = k;
        }
    }

    #[test]
    fn disjoint_union_shape() {
        let k2 = Multigraph::new(2, vec![(0, 1)]).unwrap();
        let g = k2.disjoint_union(2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 2);
        assert_eq!(g.kappa(&[0, 1]), 2);
        assert!(k2.disjoint_union(0).is_err());
        assert_eq!(k2.disjoint_union(1).unwrap(), k2);
    }

    #[test]
    fn parse_basics() {
        let gf = GraphFile::parse("graph 2\nedge 0 1\n").unwrap();
        assert_eq!(gf.graph.n(), 2);
        assert_eq!(gf.graph.m(), 1);
        let inst = gf.to_ising(Some(&ComplexValue::from_int(3)), None).unwrap();
        assert_eq!(inst.phi[0], ComplexValue::from_int(3));
        assert_eq!(inst.tau[0], ComplexValue::one());
    }

    #[test]
    fn parse_override_and_comments() {
        let text = "# a triangle\ngraph 3 default_edge real(2)\nedge 0 1\nedge 1 2\nedge 0 2 rou(1,4)\nfield 1 real(-1)\nterminals 0 2\n";
        let gf = GraphFile::parse(text).unwrap();
        let inst = gf.to_ising(None, None).unwrap();
        assert_eq!(inst.phi[0], ComplexValue::from_int(2));
        assert_eq!(inst.phi[2].eq_exact(&ComplexValue::Exact(
            crate::numerics::cyclotomic::Cyclotomic::i()
        )), Some(true));
        assert_eq!(inst.tau[1], ComplexValue::from_int(-1));
        assert_eq!(gf.terminals, Some((0, 2)));
    }

    #[test]
    fn parse_errors() {
        assert!(GraphFile::parse("graph 2\nedge 0 5\n").is_err());
        assert!(GraphFile::parse("edge 0 1\n").is_err());
        assert!(GraphFile::parse("graph 2\nfield 0 real(1)\nfield 0 real(2)\n").is_err());
        assert!(GraphFile::parse("graph 2\nedge 0 1 bogus(1)\n").is_err());
    }

    #[test]
    fn serialize_round_trip() {
        let text = "graph 3 default_edge rou(1,8)\nedge 0 1\nedge 1 2 real(1/2)\nfield 2 real(-1)\nterminals 0 1\n";
        let gf = GraphFile::parse(text).unwrap();
        let ser = gf.serialize();
        let gf2 = GraphFile::parse(&ser).unwrap();
        assert_eq!(ser, gf2.serialize());
        assert_eq!(gf.graph, gf2.graph);
    }

    #[test]
    fn bipartition_classes() {
        // path 0-1-2: one component, classes {0,2} and {1}
        let p = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.bipartition_class_sizes(), vec![Some((2, 1))]);
        // triangle: odd cycle
        assert_eq!(triangle().bipartition_class_sizes(), vec![None]);
        // self-loop
        let l = Multigraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(l.bipartition_class_sizes(), vec![None]);
    }
}
