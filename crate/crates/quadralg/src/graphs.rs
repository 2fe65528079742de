//! Graph-quotient presentations: for a finite simple graph G on [n], the
//! quadratic algebra on generators u(i) (weight 1) and u(i,j) for edges
//! (weight 2), with the three relation families of the graph-algebra
//! presentation, u(i,j) taken as 0 for non-edges. Includes the triangle
//! fixture in its one-letter alias form and its associated-graded version.

use std::collections::BTreeSet;

use crate::field::{Field, Rationals};
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::quadratic::Presentation;
use crate::word::{GenSet, Word};
use crate::Error;

/// A finite simple graph with vertices 1..=n (1-indexed in I/O).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    pub vertex_count: usize,
    /// normalized unordered pairs (i, j) with 1 <= i < j <= n
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Error> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Invalid(format!("loop at vertex {}", a)));
            }
            if a < 1 || b < 1 || a > vertex_count || b > vertex_count {
                return Err(Error::Invalid(format!(
                    "edge {}-{} outside 1..={}",
                    a, b, vertex_count
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Parses the edge-list text form `n=4; 1-2 2-3 3-4`.
    pub fn parse_text(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (head, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse("expected 'n=<count>; <edges>'".into()))?;
        let n: usize = head
            .trim()
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse("graph header must be 'n=<count>'".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::Parse("bad vertex count".into()))?;
        let mut edges = Vec::new();
        for tok in rest.split_whitespace() {
            let (a, b) = tok
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("bad edge '{}'", tok)))?;
            let a: usize = a.parse().map_err(|_| Error::Parse(format!("bad edge '{}'", tok)))?;
            let b: usize = b.parse().map_err(|_| Error::Parse(format!("bad edge '{}'", tok)))?;
            edges.push((a, b));
        }
        Graph::new(n, edges)
    }

    /// Parses the JSON form `{"n": 4, "edges": [[1,2], [2,3]]}`.
    pub fn parse_json(s: &str) -> Result<Self, Error> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(Error::Json)?;
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| Error::Parse("graph JSON missing integer field 'n'".into()))?
            as usize;
        let edges = v["edges"]
            .as_array()
            .ok_or_else(|| Error::Parse("graph JSON missing array field 'edges'".into()))?
            .iter()
            .map(|e| {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                    Error::Parse("each edge must be a two-element array".into())
                })?;
                let a = pair[0].as_u64().ok_or_else(|| Error::Parse("bad edge endpoint".into()))?;
                let b = pair[1].as_u64().ok_or_else(|| Error::Parse("bad edge endpoint".into()))?;
                Ok((a as usize, b as usize))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Graph::new(n, edges)
    }
}

fn vertex_label(i: usize) -> String {
    format!("u({})", i)
}

fn edge_label(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("u({}{})", i, j)
    } else {
        format!("u({},{})", i, j)
    }
}

/// The generator set of the graph algebra: u(i) for every vertex, then
/// u(i,j) for every edge in sorted order.
pub fn qn_gens(g: &Graph) -> GenSet {
    let mut labeled: Vec<(String, u32)> = (1..=g.vertex_count).map(|i| (vertex_label(i), 1)).collect();
    for &(i, j) in &g.edges {
        labeled.push((edge_label(g.vertex_count, i, j), 2));
    }
    GenSet::new(labeled)
}

struct QnBuilder<'a> {
    graph: &'a Graph,
    gens: GenSet,
}

impl<'a> QnBuilder<'a> {
    fn vertex(&self, i: usize) -> u8 {
        (i - 1) as u8
    }

    /// The id of u(i,j), or None when {i,j} is a non-edge (u(i,j) = 0).
    fn edge(&self, i: usize, j: usize) -> Option<u8> {
        if !self.graph.has_edge(i, j) {
            return None;
        }
        self.gens
            .by_label(&edge_label(self.graph.vertex_count, i.min(j), i.max(j)))
    }

    /// Adds c * x*y, dropping the term when either factor is a zero u(i,j).
    fn term(&self, p: &mut Poly<Rationals>, x: Option<u8>, y: Option<u8>, c: i64) {
        if let (Some(x), Some(y)) = (x, y) {
            p.add_term(Word(vec![x, y]), Rationals.from_i64(c));
        }
    }
}

/// The raw relation instances of the three families, in enumeration order
/// and including any that collapse to zero:
///   (i)  [u(i),u(j)] + u(i,j)(u(j)-u(i)) over unordered pairs i < j,
///   (ii) [u(ik),u(jk)] + [u(ik),u(j)] + [u(i),u(jk)] - u(ij)(u(ik)-u(jk))
///        over ordered distinct triples (i, j, k),
///   (iii) [u(ij),u(kl)] over the three pairings of each 4-subset.
pub fn qn_relation_instances(g: &Graph) -> [Vec<Poly<Rationals>>; 3] {
    let b = QnBuilder {
        graph: g,
        gens: qn_gens(g),
    };
    let n = g.vertex_count;
    let mut fam1 = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let (ui, uj, uij) = (Some(b.vertex(i)), Some(b.vertex(j)), b.edge(i, j));
            let mut p = Poly::zero(Rationals);
            b.term(&mut p, ui, uj, 1);
            b.term(&mut p, uj, ui, -1);
            b.term(&mut p, uij, uj, 1);
            b.term(&mut p, uij, ui, -1);
            fam1.push(p);
        }
    }
    let mut fam2 = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (ui, uj) = (Some(b.vertex(i)), Some(b.vertex(j)));
                let (uik, ujk, uij) = (b.edge(i, k), b.edge(j, k), b.edge(i, j));
                let mut p = Poly::zero(Rationals);
                b.term(&mut p, uik, ujk, 1);
                b.term(&mut p, ujk, uik, -1);
                b.term(&mut p, uik, uj, 1);
                b.term(&mut p, uj, uik, -1);
                b.term(&mut p, ui, ujk, 1);
                b.term(&mut p, ujk, ui, -1);
                b.term(&mut p, uij, uik, -1);
                b.term(&mut p, uij, ujk, 1);
                fam2.push(p);
            }
        }
    }
    let mut fam3 = Vec::new();
    for p1 in 1..=n {
        for q in p1 + 1..=n {
            for r in q + 1..=n {
                for s in r + 1..=n {
                    for (x, y, z, w) in [(p1, q, r, s), (p1, r, q, s), (p1, s, q, r)] {
                        let (uxy, uzw) = (b.edge(x, y), b.edge(z, w));
                        let mut p = Poly::zero(Rationals);
                        b.term(&mut p, uxy, uzw, 1);
                        b.term(&mut p, uzw, uxy, -1);
                        fam3.push(p);
                    }
                }
            }
        }
    }
    [fam1, fam2, fam3]
}

/// The graph-algebra presentation, canonicalized to a linearly independent
/// spanning set of relations.
pub fn qn_graph_presentation(g: &Graph) -> Result<Presentation<Rationals>, Error> {
    let gens = qn_gens(g);
    let relations: Vec<Poly<Rationals>> = qn_relation_instances(g)
        .into_iter()
        .flatten()
        .filter(|p| !p.is_zero())
        .collect();
    let canonical = Presentation::new(Rationals, gens.clone(), relations)?.canonical_relations()?;
    Presentation::new(Rationals, gens, canonical)
}

/// The triangle-graph generator set in its one-letter aliases: a, b, c for
/// u(1), u(2), u(3) and d, e, f for u(12), u(23), u(13).
pub fn k3_gens() -> GenSet {
    GenSet::new(
        [("a", 1), ("b", 1), ("c", 1), ("d", 2), ("e", 2), ("f", 2)]
            .into_iter()
            .map(|(l, w)| (l.to_string(), w))
            .collect(),
    )
}

/// The five-relation triangle fixture in one-letter aliases.
pub fn k3_fixture() -> Presentation<Rationals> {
    let gens = k3_gens();
    let rels = [
        "d*b - d*a + a*b - b*a",
        "e*c - e*b + b*c - c*b",
        "f*a - f*c + c*a - a*c",
        "d*e - e*d - f*d + f*e + d*c - c*d + a*e - e*a",
        "d*f - f*d - e*d + e*f + d*c - c*d + b*f - f*b",
    ]
    .iter()
    .map(|s| parse_poly(&gens, s).unwrap())
    .collect();
    Presentation::new(Rationals, gens, rels)
        .expect("fixture relations are quadratic")
        .with_k3_like()
}

/// The weight-homogeneous (associated graded) triangle fixture: each
/// relation of the plain fixture truncated to its top-weight part.
pub fn gr_k3_fixture() -> Presentation<Rationals> {
    let gens = k3_gens();
    let rels = [
        "d*b - d*a",
        "e*c - e*b",
        "f*a - f*c",
        "d*e - e*d - f*d + f*e",
        "d*f - f*d - e*d + e*f",
    ]
    .iter()
    .map(|s| parse_poly(&gens, s).unwrap())
    .collect();
    Presentation::new(Rationals, gens, rels)
        .expect("fixture relations are quadratic")
        .with_k3_like()
}

/// The free algebra on three weight-1 generators (no relations).
pub fn free3_fixture() -> Presentation<Rationals> {
    let gens = GenSet::new(vec![
        ("x".to_string(), 1),
        ("y".to_string(), 1),
        ("z".to_string(), 1),
    ]);
    Presentation::new(Rationals, gens, Vec::new()).expect("no relations")
}

/// Cross-check of the graph generator against the hand-written triangle
/// fixture: returns (relation spans agree after relabeling, no family-(iii)
/// relations appear for the triangle).
pub fn qn_spanning_check() -> Result<(bool, bool), Error> {
    use crate::linalg::{GradedComponent, Subspace};
    use std::sync::Arc;

    let triangle = Graph::complete(3);
    let qn = qn_graph_presentation(&triangle)?;
    let k3 = k3_fixture();
    // relabel u(1),u(2),u(3),u(12),u(13),u(23) -> a,b,c,d,f,e
    let mut map = vec![0u8; 6];
    for (from, to) in ["u(1)", "u(2)", "u(3)", "u(12)", "u(13)", "u(23)"]
        .iter()
        .zip(["a", "b", "c", "d", "f", "e"])
    {
        let src = qn.gens.by_label(from).ok_or(Error::Invalid("missing generator".into()))?;
        map[src as usize] = k3.gens.by_label(to).ok_or(Error::Invalid("missing generator".into()))?;
    }
    let relabeled: Vec<Poly<Rationals>> = qn
        .relations
        .iter()
        .map(|p| {
            Poly::from_terms(
                Rationals,
                p.iter().map(|(w, c)| {
                    (Word(w.0.iter().map(|&x| map[x as usize]).collect()), c.clone())
                }),
            )
        })
        .collect();
    let ambient = Arc::new(GradedComponent::full(&k3.gens, 2));
    let qn_span = Subspace::span(Rationals, ambient.clone(), &relabeled)?;
    let k3_span = Subspace::span(Rationals, ambient, &k3.relations)?;
    let [_, _, fam3] = qn_relation_instances(&triangle);
    Ok((qn_span == k3_span && qn_span.dim() == 5, fam3.is_empty()))
}
