//! Hughes–Van Glabbeek linking sets: translation of proofs, the graph `G_Λ`
//! with jump edges, switching cycles and the criteria P0–P3.
//!
//! Axiom links are vertices of `G_Λ`, joined to their two leaves by link
//! edges; a jump edge joins a `&` vertex to a link vertex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::EigenweightId;
use crate::mall::{
    check_proof, parse_formula, CheckError, CheckedProof, Connective, OccId, Proof, RuleKind, Sequent, Side,
};

/// Two complementary leaf occurrences, smaller first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AxiomLink(OccId, OccId);

impl AxiomLink {
    pub fn new(x: OccId, y: OccId) -> Self {
        if x <= y {
            AxiomLink(x, y)
        } else {
            AxiomLink(y, x)
        }
    }

    pub fn ends(self) -> [OccId; 2] {
        [self.0, self.1]
    }
}

impl fmt::Display for AxiomLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ax({},{})", self.0, self.1)
    }
}

/// A linking `λ` on the cut-additive resolution `Ξ↾λ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Linking {
    pub links: BTreeSet<AxiomLink>,
    /// The argument kept at every additive occurrence of `Ξ↾λ`.
    pub resolution: BTreeMap<OccId, Side>,
    /// Indices into the sequent's cut list of the retained cut pairs.
    pub cuts: BTreeSet<usize>,
}

fn is_additive(s: &Sequent, o: OccId) -> bool {
    matches!(s.formula(o).connective(), Some(Connective::With | Connective::Plus))
}

fn is_with(s: &Sequent, o: OccId) -> bool {
    s.formula(o).connective() == Some(Connective::With)
}

fn is_switch(s: &Sequent, o: OccId) -> bool {
    matches!(s.formula(o).connective(), Some(Connective::With | Connective::Par))
}

impl Linking {
    fn union(&self, other: &Linking) -> Linking {
        let mut out = self.clone();
        out.links.extend(other.links.iter().copied());
        out.resolution.extend(other.resolution.iter().map(|(o, s)| (*o, *s)));
        out.cuts.extend(other.cuts.iter().copied());
        out
    }

    /// Retained cut formulas, then the conclusion.
    pub fn roots(&self, s: &Sequent) -> Vec<OccId> {
        let cuts = self.cuts.iter().filter_map(|k| s.cuts.get(*k)).flatten().copied();
        cuts.chain(s.conclusion.iter().copied()).collect()
    }

    /// The occurrences of `Ξ↾λ`. An additive without a resolution entry keeps
    /// neither argument.
    pub fn occurrences(&self, s: &Sequent) -> BTreeSet<OccId> {
        let mut out = BTreeSet::new();
        let mut stack = self.roots(s);
        while let Some(o) = stack.pop() {
            out.insert(o);
            if let Some([l, r]) = s.node(o).children {
                if is_additive(s, o) {
                    match self.resolution.get(&o) {
                        Some(Side::Left) => stack.push(l),
                        Some(Side::Right) => stack.push(r),
                        None => {}
                    }
                } else {
                    stack.extend([l, r]);
                }
            }
        }
        out
    }

    pub fn leaves(&self, s: &Sequent) -> BTreeSet<OccId> {
        self.occurrences(s).into_iter().filter(|o| s.is_leaf(*o)).collect()
    }

    /// The side chosen at a `&` occurrence, if present.
    pub fn side_of(&self, w: OccId) -> Option<Side> {
        self.resolution.get(&w).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("linking {index} is malformed: {reason}")]
    InvalidLinking { index: usize, reason: String },
    #[error("size cap exceeded: {what} is {size}, cap {cap}")]
    SizeCapExceeded { what: &'static str, size: u64, cap: u64 },
    #[error("linking set JSON: {0}")]
    Json(String),
}

/// A set `θ` of linkings over one sequent, sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingSet {
    pub sequent: Sequent,
    pub linkings: Vec<Linking>,
}

impl LinkingSet {
    pub fn new(sequent: Sequent, linkings: impl IntoIterator<Item = Linking>) -> Self {
        let set: BTreeSet<Linking> = linkings.into_iter().collect();
        LinkingSet { sequent, linkings: set.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.linkings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.linkings.is_empty()
    }

    /// Every index, as a `Λ` covering all of `θ`.
    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Checks the shape of every linking: cut indices in range, one
    /// resolution entry per additive of `Ξ↾λ`, and links partitioning the
    /// leaves into complementary pairs.
    pub fn validate(&self) -> Result<(), NetError> {
        let s = &self.sequent;
        for (index, l) in self.linkings.iter().enumerate() {
            let bad = |reason: String| NetError::InvalidLinking { index, reason };
            if let Some(k) = l.cuts.iter().find(|k| **k >= s.cuts.len()) {
                return Err(bad(format!("cut index {k} out of range")));
            }
            let occs = l.occurrences(s);
            let additives: BTreeSet<OccId> = occs.iter().copied().filter(|o| is_additive(s, *o)).collect();
            let keyed: BTreeSet<OccId> = l.resolution.keys().copied().collect();
            if additives != keyed {
                return Err(bad("resolution does not match the additives present".into()));
            }
            let mut unlinked = l.leaves(s);
            for link in &l.links {
                let [x, y] = link.ends();
                if x == y || !unlinked.remove(&x) || !unlinked.remove(&y) {
                    return Err(bad(format!("{link} is not over two distinct unlinked leaves")));
                }
                if *s.formula(x) != s.formula(y).negate() {
                    return Err(bad(format!("{link} joins `{}` and `{}`", s.formula(x), s.formula(y))));
                }
            }
            if let Some(o) = unlinked.first() {
                return Err(bad(format!("leaf {o} is not linked")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = &self.sequent;
        let doc = LinkingSetJson {
            cuts: s.cuts.iter().map(|[a, b]| [s.formula(*a).to_string(), s.formula(*b).to_string()]).collect(),
            conclusion: s.conclusion.iter().map(|o| s.formula(*o).to_string()).collect(),
            weights: s.occurrences().filter_map(|o| s.weight(o).map(|w| (o.0, w.0))).collect(),
            leaves: s.occurrences().filter(|o| s.is_leaf(*o)).map(|o| (o.0, s.formula(o).to_string())).collect(),
            linkings: self
                .linkings
                .iter()
                .map(|l| LinkingJson {
                    links: l.links.iter().map(|k| [k.0 .0, k.1 .0]).collect(),
                    resolution: l.resolution.iter().map(|(o, side)| (o.0, *side)).collect(),
                    cuts: l.cuts.iter().copied().collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    /// Reads the format of [`LinkingSet::to_json`] and validates the result.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, NetError> {
        let doc: LinkingSetJson = serde_json::from_value(v.clone()).map_err(|e| NetError::Json(e.to_string()))?;
        let formula = |t: &str| parse_formula(t).map_err(|e| NetError::Json(format!("`{t}`: {e}")));
        let cuts =
            doc.cuts.iter().map(|[a, b]| Ok((formula(a)?, formula(b)?))).collect::<Result<Vec<_>, NetError>>()?;
        let concl = doc.conclusion.iter().map(|t| formula(t)).collect::<Result<Vec<_>, _>>()?;
        let mut sequent = Sequent::from_shape(&cuts, &concl);
        for (o, w) in &doc.weights {
            match sequent.nodes.get_mut(*o as usize) {
                Some(n) if n.formula.connective() == Some(Connective::With) => n.weight = Some(EigenweightId(*w)),
                _ => return Err(NetError::Json(format!("weight on #{o}, which is not a & occurrence"))),
            }
        }
        for (o, t) in &doc.leaves {
            match sequent.nodes.get(*o as usize) {
                Some(n) if n.formula.to_string() == *t => {}
                _ => return Err(NetError::Json(format!("leaf #{o} is not `{t}`"))),
            }
        }
        let linkings = doc.linkings.into_iter().map(|l| Linking {
            links: l.links.into_iter().map(|[x, y]| AxiomLink::new(OccId(x), OccId(y))).collect(),
            resolution: l.resolution.into_iter().map(|(o, side)| (OccId(o), side)).collect(),
            cuts: l.cuts.into_iter().collect(),
        });
        let set = LinkingSet::new(sequent, linkings);
        set.validate()?;
        Ok(set)
    }
}

#[derive(Serialize, Deserialize)]
struct LinkingSetJson {
    cuts: Vec<[String; 2]>,
    conclusion: Vec<String>,
    #[serde(default)]
    weights: BTreeMap<u32, u32>,
    #[serde(default)]
    leaves: BTreeMap<u32, String>,
    linkings: Vec<LinkingJson>,
}

#[derive(Serialize, Deserialize)]
struct LinkingJson {
    links: Vec<[u32; 2]>,
    resolution: BTreeMap<u32, Side>,
    cuts: Vec<usize>,
}

fn product(xs: &[Linking], ys: &[Linking]) -> Vec<Linking> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| x.union(y))).collect()
}

pub fn translate(p: &Proof) -> Result<LinkingSet, NetError> {
    Ok(translate_checked(&check_proof(p)?))
}

/// The rule-by-rule translation, computed bottom-up over the rule instances.
pub fn translate_checked(c: &CheckedProof) -> LinkingSet {
    let s = &c.sequent;
    let mut theta: Vec<Vec<Linking>> = vec![Vec::new(); c.nodes.len()];
    for n in (0..c.nodes.len()).rev() {
        let node = &c.nodes[n];
        let prem = |k: usize| &theta[node.premises[k]];
        let mut out = match node.kind {
            RuleKind::Ax => {
                let link = AxiomLink::new(node.conclusion[0], node.conclusion[1]);
                vec![Linking { links: [link].into(), ..Linking::default() }]
            }
            RuleKind::Par => prem(0).clone(),
            RuleKind::Plus1 | RuleKind::Plus2 => {
                let side = if node.kind == RuleKind::Plus1 { Side::Left } else { Side::Right };
                let mut t = prem(0).clone();
                t.iter_mut().for_each(|l| {
                    l.resolution.insert(node.principal, side);
                });
                t
            }
            RuleKind::Tensor => product(prem(0), prem(1)),
            RuleKind::Cut => {
                let k = s.cuts.iter().position(|p| p[0] == node.principal).expect("cut pair of a cut rule");
                let mut t = product(prem(0), prem(1));
                t.iter_mut().for_each(|l| {
                    l.cuts.insert(k);
                });
                t
            }
            RuleKind::With => {
                let mut t = Vec::new();
                for (k, side) in [(0, Side::Left), (1, Side::Right)] {
                    for l in prem(k) {
                        let mut l = l.clone();
                        l.resolution.insert(node.principal, side);
                        t.push(l);
                    }
                }
                t
            }
        };
        out.sort();
        out.dedup();
        theta[n] = out;
    }
    LinkingSet::new(s.clone(), std::mem::take(&mut theta[0]))
}

/// The `&` occurrences both of whose arguments occur in `⋃_{λ∈Λ} Ξ↾λ`.
pub fn toggled(set: &LinkingSet, lambda: &[usize]) -> BTreeSet<OccId> {
    let mut sides: BTreeMap<OccId, BTreeSet<Side>> = BTreeMap::new();
    for &i in lambda {
        for (o, side) in &set.linkings[i].resolution {
            if is_with(&set.sequent, *o) {
                sides.entry(*o).or_default().insert(*side);
            }
        }
    }
    sides.into_iter().filter(|(_, s)| s.len() == 2).map(|(o, _)| o).collect()
}

/// Whether `link` depends on the `&` occurrence `w` within `Λ`: some
/// `λ, λ′ ∈ Λ` have `link ∈ λ∖λ′` and toggle `w` alone.
pub fn depends(set: &LinkingSet, link: AxiomLink, w: OccId, lambda: &[usize]) -> bool {
    lambda.iter().any(|&i| {
        set.linkings[i].links.contains(&link)
            && lambda
                .iter()
                .any(|&j| !set.linkings[j].links.contains(&link) && toggled(set, &[i, j]).into_iter().eq([w]))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Vertex {
    Occ(OccId),
    Cut(usize),
    Link(AxiomLink),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Occ(o) => write!(f, "{o}"),
            Vertex::Cut(k) => write!(f, "cut{k}"),
            Vertex::Link(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    /// Argument edge between a subformula and its parent, or between a cut
    /// formula and its cut vertex.
    Tree,
    /// Between a leaf and its axiom link.
    Link,
    Jump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub ends: [usize; 2],
    pub kind: EdgeKind,
    /// The `⅋` or `&` vertex this edge is a switch edge of.
    pub switch: Option<usize>,
}

/// `G_Λ`, with vertices sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    adjacent: Vec<Vec<usize>>,
}

impl NetGraph {
    fn new(vertices: BTreeSet<Vertex>, edges: impl IntoIterator<Item = (Vertex, Vertex, EdgeKind, bool)>) -> Self {
        let vertices: Vec<Vertex> = vertices.into_iter().collect();
        let id = |v: Vertex| vertices.binary_search(&v).expect("edge endpoint is a vertex");
        let mut g = NetGraph { edges: Vec::new(), adjacent: vec![Vec::new(); vertices.len()], vertices: Vec::new() };
        for (a, b, kind, switch_of_b) in edges {
            let (x, y) = (id(a), id(b));
            let e = g.edges.len();
            g.edges.push(Edge { ends: [x, y], kind, switch: switch_of_b.then_some(y) });
            g.adjacent[x].push(e);
            g.adjacent[y].push(e);
        }
        g.vertices = vertices;
        g
    }

    pub fn vertex_id(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacent[v]
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let [x, y] = self.edges[e].ends;
        if x == v {
            y
        } else {
            x
        }
    }

    /// A cycle may not enter and leave `v` by two switch edges of `v`.
    fn passes(&self, v: usize, e_in: usize, e_out: usize) -> bool {
        !(self.edges[e_in].switch == Some(v) && self.edges[e_out].switch == Some(v))
    }

    /// Every switching cycle, canonicalized.
    pub fn switching_cycles(&self, budget: usize) -> Result<Vec<Cycle>, NetError> {
        let mut search = Search::new(self, budget);
        let mut out = BTreeSet::new();
        for s in 0..self.vertices.len() {
            search.run(s, true, &mut |c| {
                out.insert(c);
                false
            })?;
        }
        Ok(out.into_iter().collect())
    }

    /// Some switching cycle through `v`, if any.
    pub fn cycle_through(&self, v: usize, budget: usize) -> Result<Option<Cycle>, NetError> {
        let mut found = None;
        Search::new(self, budget).run(v, false, &mut |c| {
            found = Some(c);
            true
        })?;
        Ok(found)
    }
}

/// A cycle as its vertex sequence and the edges between consecutive
/// vertices (the last edge closes the cycle). Rotated to start at the least
/// vertex, oriented so the second vertex is smaller than the last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    fn canonical(mut vertices: Vec<usize>, mut edges: Vec<usize>) -> Cycle {
        let n = vertices.len();
        let k = (0..n).min_by_key(|i| vertices[*i]).expect("nonempty cycle");
        vertices.rotate_left(k);
        edges.rotate_left(k);
        if vertices[1] > vertices[n - 1] {
            vertices[1..].reverse();
            edges.reverse();
        }
        Cycle { vertices, edges }
    }

    pub fn render(&self, g: &NetGraph) -> String {
        let names: Vec<String> = self.vertices.iter().map(|v| g.vertices[*v].to_string()).collect();
        names.join(" - ")
    }
}

struct Search<'g> {
    g: &'g NetGraph,
    on_path: Vec<bool>,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    steps: usize,
    budget: usize,
}

impl<'g> Search<'g> {
    fn new(g: &'g NetGraph, budget: usize) -> Self {
        Search { g, on_path: vec![false; g.vertices.len()], vertices: Vec::new(), edges: Vec::new(), steps: 0, budget }
    }

    /// Simple cycles through `s`; with `above`, only over vertices greater
    /// than `s` and in one orientation. `emit` returns true to stop.
    fn run(&mut self, s: usize, above: bool, emit: &mut dyn FnMut(Cycle) -> bool) -> Result<bool, NetError> {
        self.vertices = vec![s];
        self.on_path[s] = true;
        let mut stop = false;
        for &e in self.g.incident(s) {
            let w = self.g.other(e, s);
            if (above && w <= s) || self.on_path[w] {
                continue;
            }
            if self.extend(s, w, e, above, emit)? {
                stop = true;
                break;
            }
        }
        self.on_path[s] = false;
        Ok(stop)
    }

    fn extend(
        &mut self,
        s: usize,
        v: usize,
        e_in: usize,
        above: bool,
        emit: &mut dyn FnMut(Cycle) -> bool,
    ) -> Result<bool, NetError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(NetError::SizeCapExceeded {
                what: "cycle search steps",
                size: self.steps as u64,
                cap: self.budget as u64,
            });
        }
        self.vertices.push(v);
        self.edges.push(e_in);
        self.on_path[v] = true;
        let mut stop = false;
        for &e in self.g.incident(v) {
            if e == e_in || !self.g.passes(v, e_in, e) {
                continue;
            }
            let w = self.g.other(e, v);
            if w == s {
                let oriented = !above || self.vertices[1] < v;
                if self.edges.len() >= 2 && oriented && self.g.passes(s, e, self.edges[0]) {
                    let mut edges = self.edges.clone();
                    edges.push(e);
                    if emit(Cycle::canonical(self.vertices.clone(), edges)) {
                        stop = true;
                        break;
                    }
                }
            } else if !self.on_path[w] && (!above || w > s) && self.extend(s, w, e, above, emit)? {
                stop = true;
                break;
            }
        }
        self.on_path[v] = false;
        self.vertices.pop();
        self.edges.pop();
        Ok(stop)
    }
}

/// `G_Λ`: the formula trees of `⋃ Ξ↾λ`, one vertex per retained cut and per
/// axiom link, and jump edges from each `&` to the links depending on it.
pub fn build_graph(set: &LinkingSet, lambda: &[usize]) -> NetGraph {
    let s = &set.sequent;
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    let mut occs = BTreeSet::new();
    let mut cuts = BTreeSet::new();
    let mut links = BTreeSet::new();
    for &i in lambda {
        let l = &set.linkings[i];
        occs.extend(l.occurrences(s));
        cuts.extend(l.cuts.iter().copied());
        links.extend(l.links.iter().copied());
    }
    for &o in &occs {
        vertices.insert(Vertex::Occ(o));
        if let Some(p) = s.parent(o) {
            edges.push((Vertex::Occ(o), Vertex::Occ(p), EdgeKind::Tree, is_switch(s, p)));
        }
    }
    for &k in &cuts {
        vertices.insert(Vertex::Cut(k));
        for o in s.cuts[k] {
            edges.push((Vertex::Occ(o), Vertex::Cut(k), EdgeKind::Tree, false));
        }
    }
    for &l in &links {
        vertices.insert(Vertex::Link(l));
        for o in l.ends() {
            edges.push((Vertex::Occ(o), Vertex::Link(l), EdgeKind::Link, false));
        }
    }
    for w in toggled(set, lambda) {
        for &l in &links {
            if depends(set, l, w, lambda) {
                edges.push((Vertex::Link(l), Vertex::Occ(w), EdgeKind::Jump, true));
            }
        }
    }
    NetGraph::new(vertices, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetCaps {
    /// Switchings enumerated per linking for P2.
    pub switchings: u64,
    /// Largest `|θ|` for which P3 enumerates every `Λ ⊆ θ`.
    pub linkings: usize,
    /// Steps of a single cycle search.
    pub search_steps: usize,
}

impl Default for NetCaps {
    fn default() -> Self {
        NetCaps { switchings: 1 << 16, linkings: 12, search_steps: 1 << 20 }
    }
}

pub fn switching_cycles(set: &LinkingSet, lambda: &[usize], caps: &NetCaps) -> Result<Vec<Cycle>, NetError> {
    build_graph(set, lambda).switching_cycles(caps.search_steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SwitchingDefect {
    Cycle { vertices: Vec<Vertex> },
    Disconnected { components: usize },
}

/// Why a criterion fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "criterion")]
pub enum Witness {
    /// No linking retains the cut.
    P0 { cut: usize },
    /// The `&`-resolution (choices on the `&`s that matter) carries these
    /// linkings instead of exactly one.
    P1 { resolution: BTreeMap<OccId, Side>, linkings: Vec<usize> },
    /// A switching of one linking, given by the argument kept at each `⅋`.
    P2 { linking: usize, kept: BTreeMap<OccId, Side>, defect: SwitchingDefect },
    /// `Λ` toggles these `&`s and each lies on the listed switching cycle.
    P3 { lambda: Vec<usize>, toggled: Vec<OccId>, cycles: Vec<Vec<Vertex>> },
}

fn sides(m: &BTreeMap<OccId, Side>) -> String {
    let parts: Vec<String> =
        m.iter().map(|(o, s)| format!("{o}:{}", if *s == Side::Left { "L" } else { "R" })).collect();
    format!("{{{}}}", parts.join(", "))
}

fn path(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" - ")
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::P0 { cut } => write!(f, "P0: cut{cut} occurs in no linking"),
            Witness::P1 { resolution, linkings } => {
                write!(f, "P1: &-resolution {} carries linkings {linkings:?}", sides(resolution))
            }
            Witness::P2 { linking, kept, defect } => {
                write!(f, "P2: linking {linking}, switching {}: ", sides(kept))?;
                match defect {
                    SwitchingDefect::Cycle { vertices } => write!(f, "cycle {}", path(vertices)),
                    SwitchingDefect::Disconnected { components } => write!(f, "{components} components"),
                }
            }
            Witness::P3 { lambda, toggled, cycles } => {
                let ws: Vec<String> = toggled.iter().map(|o| o.to_string()).collect();
                write!(f, "P3: Λ = {lambda:?} toggles [{}], each on a switching cycle", ws.join(", "))?;
                for c in cycles {
                    write!(f, "; {}", path(c))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail { witness } => Some(witness),
        }
    }
}

impl From<Option<Witness>> for Verdict {
    fn from(w: Option<Witness>) -> Self {
        match w {
            None => Verdict::Pass,
            Some(witness) => Verdict::Fail { witness },
        }
    }
}

/// Every cut has a leaf in some linking.
pub fn check_p0(set: &LinkingSet) -> Verdict {
    let s = &set.sequent;
    let linked: BTreeSet<OccId> = set.linkings.iter().flat_map(|l| l.links.iter().flat_map(|k| k.ends())).collect();
    let missing = s.cuts.iter().position(|pair| !pair.iter().flat_map(|o| s.subtree(*o)).any(|o| linked.contains(&o)));
    missing.map(|cut| Witness::P0 { cut }).into()
}

/// Exactly one linking on each `&`-resolution. Branches only on `&`s that
/// some remaining candidate contains; the others cannot tell candidates
/// apart.
pub fn check_p1(set: &LinkingSet) -> Verdict {
    fn go(set: &LinkingSet, withs: &[OccId], cands: Vec<usize>, chosen: &mut BTreeMap<OccId, Side>) -> Option<Witness> {
        if cands.is_empty() {
            return Some(Witness::P1 { resolution: chosen.clone(), linkings: cands });
        }
        let next = withs.iter().position(|w| cands.iter().any(|&i| set.linkings[i].resolution.contains_key(w)));
        let Some(k) = next else {
            return (cands.len() != 1).then(|| Witness::P1 { resolution: chosen.clone(), linkings: cands });
        };
        let w = withs[k];
        for side in [Side::Left, Side::Right] {
            let keep: Vec<usize> =
                cands.iter().copied().filter(|&i| set.linkings[i].side_of(w).is_none_or(|s| s == side)).collect();
            chosen.insert(w, side);
            let r = go(set, &withs[k + 1..], keep, chosen);
            chosen.remove(&w);
            if r.is_some() {
                return r;
            }
        }
        None
    }
    let withs = set.sequent.with_occurrences();
    go(set, &withs, set.all(), &mut BTreeMap::new()).into()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        self.0[a] = b;
        a != b
    }
}

/// The `⅋` vertices of one linking's graph with their two argument edges.
fn par_choices(set: &LinkingSet, g: &NetGraph) -> Vec<(OccId, [usize; 2])> {
    let s = &set.sequent;
    g.vertices
        .iter()
        .enumerate()
        .filter_map(|(v, vx)| match vx {
            Vertex::Occ(o) if s.formula(*o).connective() == Some(Connective::Par) => {
                let args: Vec<usize> =
                    g.incident(v).iter().copied().filter(|e| g.edges[*e].switch == Some(v)).collect();
                Some((*o, [args[0], args[1]]))
            }
            _ => None,
        })
        .collect()
}

fn switching_count(pars: usize, caps: &NetCaps) -> Result<u64, NetError> {
    let count = 1u64.checked_shl(pars as u32).filter(|c| *c <= caps.switchings);
    count.ok_or(NetError::SizeCapExceeded {
        what: "switchings",
        size: 1u64.checked_shl(pars as u32).unwrap_or(u64::MAX),
        cap: caps.switchings,
    })
}

/// A choice of one switch edge per ⅋ vertex.
type Switching = BTreeMap<OccId, Side>;

/// Runs every switching of linking `i`; returns the first defect found.
fn slice_defect(
    set: &LinkingSet,
    i: usize,
    caps: &NetCaps,
    need_connected: bool,
) -> Result<Option<(Switching, SwitchingDefect)>, NetError> {
    let g = build_graph(set, &[i]);
    let pars = par_choices(set, &g);
    let n = switching_count(pars.len(), caps)?;
    for mask in 0..n {
        let mut removed = BTreeSet::new();
        let mut kept = BTreeMap::new();
        for (bit, (o, [l, r])) in pars.iter().enumerate() {
            // Argument edges are added in preorder, so `l` is the left one.
            let left_first = g.edges[*l].ends[0] < g.edges[*r].ends[0];
            let (el, er) = if left_first { (*l, *r) } else { (*r, *l) };
            if mask >> bit & 1 == 0 {
                kept.insert(*o, Side::Left);
                removed.insert(er);
            } else {
                kept.insert(*o, Side::Right);
                removed.insert(el);
            }
        }
        let mut uf = UnionFind((0..g.vertices.len()).collect());
        let mut forest: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
        for (e, edge) in g.edges.iter().enumerate() {
            if removed.contains(&e) {
                continue;
            }
            let [x, y] = edge.ends;
            if !uf.union(x, y) {
                let vertices = forest_path(&forest, x, y).into_iter().map(|v| g.vertices[v]).collect();
                return Ok(Some((kept, SwitchingDefect::Cycle { vertices })));
            }
            forest[x].push(y);
            forest[y].push(x);
        }
        if need_connected {
            let roots: BTreeSet<usize> = (0..g.vertices.len()).map(|v| uf.find(v)).collect();
            if roots.len() > 1 {
                return Ok(Some((kept, SwitchingDefect::Disconnected { components: roots.len() })));
            }
        }
    }
    Ok(None)
}

fn forest_path(forest: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; forest.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &w in &forest[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut out = vec![to];
    let mut v = to;
    while v != from {
        v = prev[v];
        out.push(v);
    }
    out
}

/// Whether every switching of linking `i` is acyclic, by enumeration.
pub fn every_switching_acyclic(set: &LinkingSet, i: usize, caps: &NetCaps) -> Result<bool, NetError> {
    Ok(slice_defect(set, i, caps, false)?.is_none())
}

/// Every switching of every linking is acyclic and connected.
pub fn check_p2(set: &LinkingSet, caps: &NetCaps) -> Result<Verdict, NetError> {
    for i in 0..set.len() {
        if let Some((kept, defect)) = slice_defect(set, i, caps, true)? {
            return Ok(Some(Witness::P2 { linking: i, kept, defect }).into());
        }
    }
    Ok(Verdict::Pass)
}

/// Every `Λ ⊆ θ` with `|Λ| ≥ 2` toggles a `&` on no switching cycle of `Λ`.
pub fn check_p3(set: &LinkingSet, caps: &NetCaps) -> Result<Verdict, NetError> {
    let n = set.len();
    if n > caps.linkings {
        return Err(NetError::SizeCapExceeded { what: "linkings", size: n as u64, cap: caps.linkings as u64 });
    }
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let lambda: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if let Some(w) = toggling_defect(set, &lambda, caps)? {
            return Ok(Some(w).into());
        }
    }
    Ok(Verdict::Pass)
}

/// The P3 witness for one `Λ`, if it fails.
pub fn toggling_defect(set: &LinkingSet, lambda: &[usize], caps: &NetCaps) -> Result<Option<Witness>, NetError> {
    let ws = toggled(set, lambda);
    let g = build_graph(set, lambda);
    let mut cycles = Vec::new();
    for &w in &ws {
        let v = g.vertex_id(Vertex::Occ(w)).expect("toggled & is a vertex");
        match g.cycle_through(v, caps.search_steps)? {
            None => return Ok(None),
            Some(c) => cycles.push(c.vertices.iter().map(|x| g.vertices[*x]).collect()),
        }
    }
    Ok(Some(Witness::P3 { lambda: lambda.to_vec(), toggled: ws.into_iter().collect(), cycles }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetReport {
    pub p0: Verdict,
    pub p1: Verdict,
    pub p2: Verdict,
    pub p3: Verdict,
}

impl NetReport {
    pub fn passed(&self) -> bool {
        [&self.p0, &self.p1, &self.p2, &self.p3].iter().all(|v| v.passed())
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 4] {
        [("P0", &self.p0), ("P1", &self.p1), ("P2", &self.p2), ("P3", &self.p3)]
    }
}

pub fn check_net(set: &LinkingSet, caps: &NetCaps) -> Result<NetReport, NetError> {
    Ok(NetReport { p0: check_p0(set), p1: check_p1(set), p2: check_p2(set, caps)?, p3: check_p3(set, caps)? })
}
