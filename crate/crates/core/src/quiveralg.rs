//! Quivers, admissible relations, normal-form path bases and presentations of
//! basic split algebras.
//!
//! Paths compose left to right: the path `a*b` runs along `a` first, then `b`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::exactlin::{Field, Matrix, Quotient, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("paths of length {0} survive the relations; algebra is not finite dimensional at this bound")]
    NotFiniteDimensional(usize),
    #[error("algebra is not basic: {0}")]
    NotBasic(String),
    #[error("multiplication table is not associative: {0}")]
    NotAssociative(String),
    #[error("invalid algebra data: {0}")]
    InvalidInput(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Quiver, AlgebraError> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(AlgebraError::Duplicate(v.clone()));
            }
        }
        Ok(Quiver {
            vertices,
            arrows: Vec::new(),
        })
    }

    /// Vertices labelled `1..=n`.
    pub fn numbered(n: usize) -> Quiver {
        Quiver::new((1..=n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize, AlgebraError> {
        let s = self.vertex(source)?;
        let t = self.vertex(target)?;
        self.add_arrow_at(name, s, t)
    }

    pub fn add_arrow_at(&mut self, name: &str, source: usize, target: usize) -> Result<usize, AlgebraError> {
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(AlgebraError::Duplicate(name.to_string()));
        }
        if source >= self.vertices.len() || target >= self.vertices.len() {
            return Err(AlgebraError::UnknownVertex(format!("{source}->{target}")));
        }
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex(&self, label: &str) -> Result<usize, AlgebraError> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| AlgebraError::UnknownVertex(label.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<usize, AlgebraError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| AlgebraError::UnknownArrow(name.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// Path through the named arrows, left to right.
    pub fn path(&self, names: &[&str]) -> Result<Path, AlgebraError> {
        let ids = names
            .iter()
            .map(|n| self.arrow(n))
            .collect::<Result<Vec<_>, _>>()?;
        Path::from_arrows(self, ids)
    }

    /// Parse `a*b*c` (or a vertex label preceded by `e` for a trivial path: `e_1`).
    pub fn parse_path(&self, text: &str) -> Result<Path, AlgebraError> {
        let t = text.trim();
        if let Some(v) = t.strip_prefix("e_") {
            return Ok(Path::trivial(self.vertex(v)?));
        }
        let names: Vec<&str> = t.split('*').map(str::trim).collect();
        if names.iter().any(|n| n.is_empty()) {
            return Err(AlgebraError::InvalidPath(t.to_string()));
        }
        self.path(&names)
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_count_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for a in &self.arrows {
            m[a.source][a.target] += 1;
        }
        m
    }
}

/// A path in a quiver. Trivial paths have no arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Result<Path, AlgebraError> {
        let Some(&first) = arrows.first() else {
            return Err(AlgebraError::InvalidPath("empty arrow list".into()));
        };
        for w in arrows.windows(2) {
            if q.arrows[w[0]].target != q.arrows[w[1]].source {
                return Err(AlgebraError::InvalidPath(format!(
                    "{} then {} is not composable",
                    q.arrows[w[0]].name, q.arrows[w[1]].name
                )));
            }
        }
        Ok(Path {
            source: q.arrows[first].source,
            target: q.arrows[*arrows.last().unwrap()].target,
            arrows,
        })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `other`, if composable.
    pub fn then(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            target: other.target,
            arrows,
        })
    }

    pub fn reversed(&self) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path {
            source: self.target,
            target: self.source,
            arrows,
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(Scalar, Path)>,
}

impl Relation {
    pub fn new(terms: Vec<(Scalar, Path)>) -> Result<Relation, AlgebraError> {
        let mut merged: BTreeMap<Path, Scalar> = BTreeMap::new();
        let mut field = None;
        for (c, p) in terms {
            if p.len() < 2 {
                return Err(AlgebraError::InvalidRelation(
                    "every path in a relation must have length at least 2".into(),
                ));
            }
            if *field.get_or_insert(c.field()) != c.field() {
                return Err(AlgebraError::InvalidRelation("mixed fields".into()));
            }
            let e = merged.entry(p).or_insert_with(|| c.field().zero());
            *e = &*e + &c;
        }
        let terms: Vec<(Scalar, Path)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        let Some((_, first)) = terms.first() else {
            return Err(AlgebraError::InvalidRelation("relation has no nonzero term".into()));
        };
        if terms
            .iter()
            .any(|(_, p)| p.source != first.source || p.target != first.target)
        {
            return Err(AlgebraError::InvalidRelation("paths are not parallel".into()));
        }
        Ok(Relation { terms })
    }

    /// Single-path (zero) relation.
    pub fn zero(path: Path, field: Field) -> Result<Relation, AlgebraError> {
        Relation::new(vec![(field.one(), path)])
    }

    pub fn terms(&self) -> &[(Scalar, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }

    pub fn reversed(&self) -> Relation {
        Relation {
            terms: self
                .terms
                .iter()
                .map(|(c, p)| (c.clone(), p.reversed()))
                .collect(),
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        self.terms
            .iter()
            .map(|(c, p)| format!("{c} {}", p.display(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Word in the arrows, ordered by length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Word(Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly = BTreeMap<Word, Scalar>;

fn add_term(p: &mut Poly, w: Word, c: Scalar) {
    match p.get_mut(&w) {
        Some(e) => {
            let s = &*e + &c;
            if s.is_zero() {
                p.remove(&w);
            } else {
                *e = s;
            }
        }
        None => {
            if !c.is_zero() {
                p.insert(w, c);
            }
        }
    }
}

/// Rewriting system for `kQ / (I + arrows^(L+1))`.
#[derive(Clone, Debug)]
struct Rewriter {
    max_len: usize,
    rules: Vec<Poly>,
    leading: HashMap<Vec<usize>, usize>,
    lengths: Vec<usize>,
}

impl Rewriter {
    fn new(max_len: usize) -> Rewriter {
        Rewriter {
            max_len,
            rules: Vec::new(),
            leading: HashMap::new(),
            lengths: Vec::new(),
        }
    }

    fn lead(p: &Poly) -> &Word {
        p.keys().next_back().expect("nonzero polynomial")
    }

    fn rebuild_index(&mut self) {
        self.leading.clear();
        let mut lens = HashSet::new();
        for (i, r) in self.rules.iter().enumerate() {
            let w = Self::lead(r).0.clone();
            lens.insert(w.len());
            self.leading.insert(w, i);
        }
        self.lengths = lens.into_iter().collect();
        self.lengths.sort_unstable();
    }

    /// Position and rule of some leading word occurring inside `w`.
    fn divisor(&self, w: &[usize]) -> Option<(usize, usize)> {
        for &l in &self.lengths {
            if l > w.len() {
                break;
            }
            for start in 0..=w.len() - l {
                if let Some(&r) = self.leading.get(&w[start..start + l]) {
                    return Some((start, r));
                }
            }
        }
        None
    }

    fn reduce(&self, mut work: Poly) -> Poly {
        let mut out = Poly::new();
        while let Some((w, c)) = work.pop_last() {
            if w.0.len() > self.max_len {
                continue;
            }
            match self.divisor(&w.0) {
                None => {
                    out.insert(w, c);
                }
                Some((start, r)) => {
                    let rule = &self.rules[r];
                    let lead_len = Self::lead(rule).0.len();
                    let prefix = &w.0[..start];
                    let suffix = &w.0[start + lead_len..];
                    let mut iter = rule.iter().rev();
                    iter.next();
                    for (rw, rc) in iter {
                        let len = prefix.len() + rw.0.len() + suffix.len();
                        if len > self.max_len {
                            continue;
                        }
                        let mut nw = Vec::with_capacity(len);
                        nw.extend_from_slice(prefix);
                        nw.extend_from_slice(&rw.0);
                        nw.extend_from_slice(suffix);
                        add_term(&mut work, Word(nw), -&(&c * rc));
                    }
                }
            }
        }
        out
    }

    fn is_normal(&self, w: &[usize]) -> bool {
        self.divisor(w).is_none()
    }

    /// Completion by overlap resolution.
    fn complete(&mut self, generators: Vec<Poly>) {
        let mut pending = generators;
        let mut done_pairs: HashSet<(Vec<usize>, Vec<usize>, usize)> = HashSet::new();
        loop {
            while let Some(p) = pending.pop() {
                let r = self.reduce(p);
                if r.is_empty() {
                    continue;
                }
                let inv = Self::lead(&r).clone();
                let inv = r[&inv].inv().expect("nonzero leading coefficient");
                let r: Poly = r.into_iter().map(|(w, c)| (w, &c * &inv)).collect();
                let lw = Self::lead(&r).0.clone();
                let mut kept = Vec::new();
                for old in self.rules.drain(..) {
                    let ow = &Self::lead(&old).0;
                    if contains(ow, &lw) {
                        pending.push(old);
                    } else {
                        kept.push(old);
                    }
                }
                kept.push(r);
                self.rules = kept;
                self.rebuild_index();
            }
            // interreduce tails so normal forms stay canonical
            let mut changed = false;
            for i in 0..self.rules.len() {
                let rule = self.rules[i].clone();
                let lead = Self::lead(&rule).clone();
                let mut tail = rule.clone();
                tail.remove(&lead);
                let red = self.reduce(tail.clone());
                if red != tail {
                    let mut nr = red;
                    nr.insert(lead, rule.values().next_back().unwrap().clone());
                    self.rules[i] = nr;
                    changed = true;
                }
            }
            if changed {
                self.rebuild_index();
            }
            let mut new_polys = Vec::new();
            for i in 0..self.rules.len() {
                for j in 0..self.rules.len() {
                    let u = Self::lead(&self.rules[i]).0.clone();
                    let v = Self::lead(&self.rules[j]).0.clone();
                    for k in 1..u.len().min(v.len()) {
                        if u[u.len() - k..] != v[..k] {
                            continue;
                        }
                        if !done_pairs.insert((u.clone(), v.clone(), k)) {
                            continue;
                        }
                        if u.len() + v.len() - k > self.max_len {
                            continue;
                        }
                        let mut s = Poly::new();
                        for (w, c) in &self.rules[i] {
                            let mut nw = w.0.clone();
                            nw.extend_from_slice(&v[k..]);
                            add_term(&mut s, Word(nw), c.clone());
                        }
                        for (w, c) in &self.rules[j] {
                            let mut nw = u[..u.len() - k].to_vec();
                            nw.extend_from_slice(&w.0);
                            add_term(&mut s, Word(nw), -c);
                        }
                        let s = self.reduce(s);
                        if !s.is_empty() {
                            new_polys.push(s);
                        }
                    }
                }
            }
            if new_polys.is_empty() {
                break;
            }
            pending = new_polys;
        }
    }
}

fn contains(hay: &[usize], needle: &[usize]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Sparse linear combination of basis elements: `(basis index, coefficient)`.
pub type Sparse = Vec<(usize, Scalar)>;

/// A finite-dimensional quotient of a path algebra by an admissible ideal.
#[derive(Clone, Debug)]
pub struct BoundQuiverAlgebra {
    name: String,
    field: Field,
    quiver: Quiver,
    relations: Vec<Relation>,
    max_path_len: usize,
    rewriter: Rewriter,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    products: Vec<Vec<Sparse>>,
    nilpotency: usize,
    opposite: OnceLock<Arc<BoundQuiverAlgebra>>,
}

pub const DEFAULT_MAX_PATH_LEN: usize = 30;
const NORMAL_WORD_BUDGET: usize = 200_000;

/// Compute the normal-form basis and structure constants of `kQ / (rels)`.
pub fn build_algebra(
    name: &str,
    field: Field,
    quiver: Quiver,
    relations: Vec<Relation>,
    max_path_len: usize,
) -> Result<BoundQuiverAlgebra, AlgebraError> {
    for r in &relations {
        if r.terms.iter().any(|(c, _)| c.field() != field) {
            return Err(AlgebraError::InvalidRelation("coefficient over the wrong field".into()));
        }
        for (_, p) in &r.terms {
            if Path::from_arrows(&quiver, p.arrows.clone()).is_err() || p.len() < 2 {
                return Err(AlgebraError::InvalidRelation("bad path".into()));
            }
        }
    }
    let max_len = max_path_len.max(2);
    let mut rw = Rewriter::new(max_len);
    let gens = relations
        .iter()
        .map(|r| {
            r.terms
                .iter()
                .map(|(c, p)| (Word(p.arrows.clone()), c.clone()))
                .collect::<Poly>()
        })
        .collect();
    rw.complete(gens);

    let mut basis: Vec<Path> = (0..quiver.vertex_count()).map(Path::trivial).collect();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for a in 0..quiver.arrow_count() {
        if rw.is_normal(&[a]) {
            frontier.push(vec![a]);
        }
    }
    let mut longest = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in frontier {
            longest = longest.max(w.len());
            if w.len() >= max_len {
                return Err(AlgebraError::NotFiniteDimensional(max_len));
            }
            let t = quiver.arrows[*w.last().unwrap()].target;
            for (a, arr) in quiver.arrows.iter().enumerate() {
                if arr.source != t {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(a);
                if rw.is_normal(&nw) {
                    next.push(nw);
                }
            }
            basis.push(Path::from_arrows(&quiver, w).expect("normal words are paths"));
            if basis.len() > NORMAL_WORD_BUDGET {
                return Err(AlgebraError::NotFiniteDimensional(max_len));
            }
        }
        frontier = next;
    }
    basis.sort();
    let index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut alg = BoundQuiverAlgebra {
        name: name.to_string(),
        field,
        quiver,
        relations,
        max_path_len: max_len,
        rewriter: rw,
        basis,
        index,
        products: Vec::new(),
        nilpotency: longest + 1,
        opposite: OnceLock::new(),
    };
    let n = alg.basis.len();
    let mut products = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some(p) = alg.basis[i].then(&alg.basis[j]) {
                products[i][j] = alg.normal_form(&p);
            }
        }
    }
    alg.products = products;
    Ok(alg)
}

impl BoundQuiverAlgebra {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn max_path_len(&self) -> usize {
        self.max_path_len
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Smallest `N` such that every path of length `N` vanishes.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency
    }

    /// Same quiver, relations and field.
    pub fn same_as(&self, other: &BoundQuiverAlgebra) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field
                && self.quiver == other.quiver
                && self.relations == other.relations)
    }

    pub fn is_hereditary_presentation(&self) -> bool {
        self.relations.is_empty()
    }

    /// Normal form of a path as a combination of basis paths.
    pub fn normal_form(&self, p: &Path) -> Sparse {
        if p.is_trivial() {
            return vec![(self.index[p], self.field.one())];
        }
        let mut poly = Poly::new();
        poly.insert(Word(p.arrows.clone()), self.field.one());
        let red = self.rewriter.reduce(poly);
        let mut out: Sparse = red
            .into_iter()
            .map(|(w, c)| {
                let path = Path::from_arrows(&self.quiver, w.0).expect("path");
                (self.index[&path], c)
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Product of two basis elements (left then right).
    pub fn mul_basis(&self, i: usize, j: usize) -> &Sparse {
        &self.products[i][j]
    }

    /// Product of two dense elements.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.products[i][j] {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    /// Dense vector of a path.
    pub fn path_element(&self, p: &Path) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        for (i, c) in self.normal_form(p) {
            v[i] = c;
        }
        v
    }

    pub fn idempotent(&self, v: usize) -> Vec<Scalar> {
        self.path_element(&Path::trivial(v))
    }

    /// Basis indices of paths ending at `v`.
    pub fn paths_ending_at(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].target == v).collect()
    }

    /// Basis indices of paths starting at `v`.
    pub fn paths_starting_at(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].source == v).collect()
    }

    /// Basis indices of paths `u -> w`.
    pub fn paths_between(&self, u: usize, w: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].source == u && self.basis[i].target == w)
            .collect()
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for p in &self.basis {
            m[p.source][p.target] += 1;
        }
        m
    }

    /// Opposite algebra (cached).
    pub fn opposite(&self) -> Arc<BoundQuiverAlgebra> {
        self.opposite
            .get_or_init(|| Arc::new(self.build_opposite()))
            .clone()
    }

    fn build_opposite(&self) -> BoundQuiverAlgebra {
        build_algebra(
            &format!("{}^op", self.name),
            self.field,
            self.quiver.opposite(),
            self.relations.iter().map(Relation::reversed).collect(),
            self.max_path_len,
        )
        .expect("opposite of a finite-dimensional algebra is finite dimensional")
    }

    pub fn structure_constants(&self) -> StructureConstants {
        let n = self.dim();
        let mut table = vec![self.field.zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in &self.products[i][j] {
                    table[(i * n + j) * n + k] = c.clone();
                }
            }
        }
        StructureConstants {
            field: self.field,
            dim: n,
            table,
        }
    }

    /// Check `(p q) r = p (q r)` on all triples of basis paths.
    pub fn check_associativity(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if self.products[i][j].is_empty() {
                    continue;
                }
                let mut ij = vec![self.field.zero(); n];
                for (k, c) in &self.products[i][j] {
                    ij[*k] = c.clone();
                }
                for k in 0..n {
                    let mut ek = vec![self.field.zero(); n];
                    ek[k] = self.field.one();
                    let mut ei = vec![self.field.zero(); n];
                    ei[i] = self.field.one();
                    let mut jk = vec![self.field.zero(); n];
                    for (l, c) in &self.products[j][k] {
                        jk[*l] = c.clone();
                    }
                    if self.mul(&ij, &ek) != self.mul(&ei, &jk) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for BoundQuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {}", self.name)?;
        writeln!(f, "field {}", self.field)?;
        writeln!(f, "vertices {}", self.quiver.vertices.join(" "))?;
        for a in &self.quiver.arrows {
            writeln!(
                f,
                "arrow {} {} {}",
                a.name, self.quiver.vertices[a.source], self.quiver.vertices[a.target]
            )?;
        }
        for r in &self.relations {
            write!(f, "rel")?;
            for (c, p) in &r.terms {
                let c = c.to_string();
                let c = if c.starts_with('-') { c } else { format!("+{c}") };
                write!(f, " {c} {}", p.display(&self.quiver))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Multiplication table of a finite-dimensional algebra on an ordered basis:
/// `b_i * b_j = sum_k table[(i*dim + j)*dim + k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub field: Field,
    pub dim: usize,
    pub table: Vec<Scalar>,
}

impl StructureConstants {
    pub fn zero_algebra(field: Field, dim: usize) -> StructureConstants {
        StructureConstants {
            field,
            dim,
            table: vec![field.zero(); dim * dim * dim],
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.dim;
        self.table[(i * n + j) * n + k] = v;
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![self.field.zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.table[base + k];
                    if !c.is_zero() {
                        *o = &*o + &(&ab * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> x * y`.
    pub fn left_mult(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(x, &unit(self.field, n, j))).collect();
        Matrix::from_columns(self.field, n, &cols)
    }

    /// Matrix of `y -> y * x`.
    pub fn right_mult(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(&unit(self.field, n, j), x)).collect();
        Matrix::from_columns(self.field, n, &cols)
    }
}

pub fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Result of extracting a quiver with relations from an abstract algebra.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub algebra: BoundQuiverAlgebra,
    /// `arrows[i][j]`: number of arrows `i -> j`.
    pub arrows: Vec<Vec<usize>>,
    /// `relations[i][j]`: number of minimal relations from `i` to `j`.
    pub relations: Vec<Vec<usize>>,
    /// Nilpotency index of the radical.
    pub radical_nilpotency: usize,
}

/// Gabriel quiver and minimal relations of a basic split algebra.
///
/// The idempotents `e_i` become vertices, and arrows `i -> j` span a complement of
/// `e_i rad^2 e_j` in `e_i rad e_j` (so `e_i * x * e_j = x`, matching left-to-right paths).
pub fn present_algebra(
    name: &str,
    sc: &StructureConstants,
    idempotents: &[Vec<Scalar>],
    labels: Option<&[String]>,
) -> Result<Presentation, AlgebraError> {
    let field = sc.field;
    let n = sc.dim;
    let nv = idempotents.len();
    if idempotents.iter().any(|e| e.len() != n) {
        return Err(AlgebraError::InvalidInput("idempotent of wrong length".into()));
    }
    check_associative(sc)?;
    // idempotent checks
    let mut one = vec![field.zero(); n];
    for (i, e) in idempotents.iter().enumerate() {
        for (j, f) in idempotents.iter().enumerate() {
            let p = sc.mul(e, f);
            let expect = if i == j { e.clone() } else { vec![field.zero(); n] };
            if p != expect {
                return Err(AlgebraError::InvalidInput(format!(
                    "idempotents {i} and {j} are not orthogonal idempotents"
                )));
            }
        }
        for k in 0..n {
            one[k] = &one[k] + &e[k];
        }
    }
    for k in 0..n {
        let b = unit(field, n, k);
        if sc.mul(&one, &b) != b || sc.mul(&b, &one) != b {
            return Err(AlgebraError::InvalidInput("idempotents do not sum to the identity".into()));
        }
    }
    // Peirce blocks e_i A e_j
    let mut peirce: Vec<Vec<Matrix>> = Vec::with_capacity(nv);
    for i in 0..nv {
        let li = sc.left_mult(&idempotents[i]);
        let mut row = Vec::with_capacity(nv);
        for j in 0..nv {
            let rj = sc.right_mult(&idempotents[j]);
            row.push((&li * &rj).column_space());
        }
        peirce.push(row);
    }
    // radical blocks
    let mut rad: Vec<Vec<Matrix>> = peirce.clone();
    for i in 0..nv {
        let eia = {
            let mut cols = Vec::new();
            for j in 0..nv {
                cols.extend(peirce[i][j].columns());
            }
            Matrix::from_columns(field, n, &cols)
        };
        let d = eia.cols();
        if field.characteristic() != 0 && d as u64 % field.characteristic() == 0 {
            return Err(AlgebraError::NotBasic(
                "characteristic divides a projective dimension; radical test unavailable".into(),
            ));
        }
        // functional x -> tr(L_x on e_i A), expressed on the basis of e_i A e_i
        let block = &peirce[i][i];
        let mut traces = Vec::new();
        for c in block.columns() {
            let lx = sc.left_mult(&c);
            let img = &lx * &eia;
            let coords = eia.solve(&img).unwrap().expect("e_i A is a left ideal");
            traces.push(coords.trace());
        }
        let functional = Matrix::from_vec(field, 1, traces.len(), traces).unwrap();
        let ker = functional.kernel_basis();
        rad[i][i] = block * &ker;
        if block.cols() != rad[i][i].cols() + 1 {
            return Err(AlgebraError::NotBasic(format!("vertex {i} has a non-local corner")));
        }
    }
    // rad^2 blocks and radical nilpotency
    let prod_span = |x: &Matrix, y: &Matrix| -> Vec<Vec<Scalar>> {
        let mut cols = Vec::new();
        for a in x.columns() {
            for b in y.columns() {
                let p = sc.mul(&a, &b);
                if p.iter().any(|s| !s.is_zero()) {
                    cols.push(p);
                }
            }
        }
        cols
    };
    let mut power = rad.clone();
    let mut rad2: Option<Vec<Vec<Matrix>>> = None;
    let mut nil = 1;
    while !power.iter().flatten().all(|m| m.cols() == 0) {
        if nil > n + 1 {
            return Err(AlgebraError::NotBasic("radical is not nilpotent".into()));
        }
        let mut next = Vec::with_capacity(nv);
        for i in 0..nv {
            let mut row = Vec::with_capacity(nv);
            for j in 0..nv {
                let mut cols = Vec::new();
                for k in 0..nv {
                    cols.extend(prod_span(&power[i][k], &rad[k][j]));
                }
                row.push(Matrix::from_columns(field, n, &cols).column_space());
            }
            next.push(row);
        }
        if rad2.is_none() {
            rad2 = Some(next.clone());
        }
        power = next;
        nil += 1;
    }
    let rad2 = rad2.unwrap_or_else(|| {
        (0..nv)
            .map(|_| (0..nv).map(|_| Matrix::zeros(field, n, 0)).collect())
            .collect()
    });
    // Gabriel quiver
    let labels: Vec<String> = match labels {
        Some(l) => l.to_vec(),
        None => (1..=nv).map(|i| i.to_string()).collect(),
    };
    let mut quiver = Quiver::new(labels.clone())?;
    let mut arrow_elems: Vec<Vec<Scalar>> = Vec::new();
    let mut arrow_counts = vec![vec![0; nv]; nv];
    for i in 0..nv {
        for j in 0..nv {
            let mut span = rad2[i][j].clone();
            let mut count = 0;
            for c in rad[i][j].columns() {
                let cm = Matrix::from_columns(field, n, &[c.clone()]);
                let ext = span.hstack(&cm);
                if ext.rank() > span.cols() {
                    span = ext;
                    count += 1;
                    quiver.add_arrow_at(&format!("x{}_{}_{}", labels[i], labels[j], count), i, j)?;
                    arrow_elems.push(c);
                }
            }
            arrow_counts[i][j] = count;
        }
    }
    // paths up to the radical nilpotency index, and their images
    let big_n = nil;
    let mut paths: Vec<Path> = (0..nv).map(Path::trivial).collect();
    let mut images: Vec<Vec<Scalar>> = idempotents.to_vec();
    let mut frontier: Vec<usize> = (0..nv).collect();
    for _ in 0..big_n {
        let mut next = Vec::new();
        for &pi in &frontier {
            let p = paths[pi].clone();
            for (a, arr) in quiver.arrows.iter().enumerate() {
                if arr.source != p.target {
                    continue;
                }
                let np = if p.is_trivial() {
                    Path::from_arrows(&quiver, vec![a]).unwrap()
                } else {
                    let mut ar = p.arrows.clone();
                    ar.push(a);
                    Path::from_arrows(&quiver, ar).unwrap()
                };
                let img = if p.is_trivial() {
                    arrow_elems[a].clone()
                } else {
                    sc.mul(&images[pi], &arrow_elems[a])
                };
                paths.push(np);
                images.push(img);
                next.push(paths.len() - 1);
            }
        }
        frontier = next;
        if paths.len() > 50_000 {
            return Err(AlgebraError::InvalidInput("too many paths while presenting".into()));
        }
    }
    let path_index: HashMap<Path, usize> =
        paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let np = paths.len();
    let mut relations = Vec::new();
    let mut relation_counts = vec![vec![0; nv]; nv];
    for i in 0..nv {
        for j in 0..nv {
            let idx: Vec<usize> = (0..np)
                .filter(|&k| paths[k].source == i && paths[k].target == j && paths[k].len() >= 2)
                .collect();
            if idx.is_empty() {
                continue;
            }
            let img = Matrix::from_columns(field, n, &idx.iter().map(|&k| images[k].clone()).collect::<Vec<_>>());
            let ker = img.kernel_basis();
            if ker.cols() == 0 {
                continue;
            }
            // generated part: arrows * K + K * arrows (inside paths of length >= 2 up to N)
            let local: HashMap<usize, usize> = idx.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let mut gen_cols: Vec<Vec<Scalar>> = Vec::new();
            for k in 0..nv {
                // K_{k,j} prefixed by arrows i->k, and K_{i,k} followed by arrows k->j
                for (a, arr) in quiver.arrows.iter().enumerate() {
                    if arr.source == i && arr.target == k {
                        for kv in kernel_vectors(field, &paths, &images, n, k, j) {
                            let mut v = vec![field.zero(); idx.len()];
                            for (pi, c) in kv {
                                let mut ar = vec![a];
                                ar.extend_from_slice(&paths[pi].arrows);
                                if ar.len() > big_n {
                                    continue;
                                }
                                let q = Path::from_arrows(&quiver, ar).unwrap();
                                let qi = path_index[&q];
                                v[local[&qi]] = &v[local[&qi]] + &c;
                            }
                            gen_cols.push(v);
                        }
                    }
                    if arr.source == k && arr.target == j {
                        for kv in kernel_vectors(field, &paths, &images, n, i, k) {
                            let mut v = vec![field.zero(); idx.len()];
                            for (pi, c) in kv {
                                let mut ar = paths[pi].arrows.clone();
                                ar.push(a);
                                if ar.len() > big_n {
                                    continue;
                                }
                                let q = Path::from_arrows(&quiver, ar).unwrap();
                                let qi = path_index[&q];
                                v[local[&qi]] = &v[local[&qi]] + &c;
                            }
                            gen_cols.push(v);
                        }
                    }
                }
            }
            let mut span = Matrix::from_columns(field, idx.len(), &gen_cols).column_space();
            let mut count = 0;
            for c in ker.columns() {
                let cm = Matrix::from_columns(field, idx.len(), &[c.clone()]);
                let ext = span.hstack(&cm);
                if ext.rank() > span.cols() {
                    span = ext;
                    count += 1;
                    let terms = c
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| !s.is_zero())
                        .map(|(l, s)| (s.clone(), paths[idx[l]].clone()))
                        .collect();
                    relations.push(Relation::new(terms)?);
                }
            }
            relation_counts[i][j] = count;
        }
    }
    let algebra = build_algebra(name, field, quiver, relations, (big_n + 1).max(DEFAULT_MAX_PATH_LEN))?;
    if algebra.dim() != n {
        return Err(AlgebraError::InvalidInput(format!(
            "presentation has dimension {} but the algebra has dimension {n}",
            algebra.dim()
        )));
    }
    Ok(Presentation {
        algebra,
        arrows: arrow_counts,
        relations: relation_counts,
        radical_nilpotency: nil,
    })
}

/// Kernel vectors (over paths `u -> w` of length >= 2) of the path-to-algebra map.
fn kernel_vectors(
    field: Field,
    paths: &[Path],
    images: &[Vec<Scalar>],
    n: usize,
    u: usize,
    w: usize,
) -> Vec<Vec<(usize, Scalar)>> {
    let idx: Vec<usize> = (0..paths.len())
        .filter(|&k| paths[k].source == u && paths[k].target == w && paths[k].len() >= 2)
        .collect();
    if idx.is_empty() {
        return Vec::new();
    }
    let img = Matrix::from_columns(field, n, &idx.iter().map(|&k| images[k].clone()).collect::<Vec<_>>());
    img.kernel_basis()
        .columns()
        .into_iter()
        .map(|c| {
            c.into_iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(l, s)| (idx[l], s))
                .collect()
        })
        .collect()
}

/// Associativity spot check on a deterministic sample of basis triples.
fn check_associative(sc: &StructureConstants) -> Result<(), AlgebraError> {
    let n = sc.dim;
    let total = n * n * n;
    let step = (total / 4000).max(1);
    let mut t = 0;
    while t < total {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        let bi = unit(sc.field, n, i);
        let bj = unit(sc.field, n, j);
        let bk = unit(sc.field, n, k);
        if sc.mul(&sc.mul(&bi, &bj), &bk) != sc.mul(&bi, &sc.mul(&bj, &bk)) {
            return Err(AlgebraError::NotAssociative(format!("basis triple ({i},{j},{k})")));
        }
        t += step;
    }
    Ok(())
}

/// Quotient of an algebra table by a two-sided ideal spanned by the given columns.
pub fn quotient_algebra(
    sc: &StructureConstants,
    ideal: &Matrix,
) -> (StructureConstants, Quotient) {
    let q = Quotient::of(sc.field, sc.dim, ideal);
    let m = q.dim();
    let mut out = StructureConstants::zero_algebra(sc.field, m);
    let sec = q.section.columns();
    for i in 0..m {
        for j in 0..m {
            let p = sc.mul(&sec[i], &sec[j]);
            let img = q.projection.mul_vec(&p);
            for (k, v) in img.into_iter().enumerate() {
                out.set(i, j, k, v);
            }
        }
    }
    (out, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn a4() -> BoundQuiverAlgebra {
        let mut q = Quiver::numbered(4);
        q.add_arrow("delta", "1", "2").unwrap();
        q.add_arrow("alpha", "2", "3").unwrap();
        q.add_arrow("beta", "3", "4").unwrap();
        q.add_arrow("gamma", "4", "2").unwrap();
        let rels = [["alpha", "beta"], ["beta", "gamma"], ["gamma", "alpha"]]
            .iter()
            .map(|p| Relation::zero(q.path(p).unwrap(), Q).unwrap())
            .collect();
        build_algebra("A4", Q, q, rels, 30).unwrap()
    }

    #[test]
    fn a4_dimension_and_nilpotency() {
        let a = a4();
        // 4 trivial paths, 4 arrows and delta*alpha
        assert_eq!(a.dim(), 9);
        assert_eq!(a.nilpotency_index(), 3);
        assert_eq!(a.cartan_matrix().iter().flatten().sum::<usize>(), 9);
        assert!(a.check_associativity());
        assert_eq!(a.opposite().dim(), 9);
    }

    #[test]
    fn point_and_dual_numbers() {
        let q = Quiver::numbered(1);
        let a = build_algebra("k", Q, q, vec![], 30).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.nilpotency_index(), 1);
        let mut q = Quiver::numbered(1);
        q.add_arrow("x", "1", "1").unwrap();
        let r = Relation::zero(q.path(&["x", "x"]).unwrap(), Q).unwrap();
        let a = build_algebra("k[x]/x^2", Q, q, vec![r], 30).unwrap();
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn infinite_dimensional_is_rejected() {
        let mut q = Quiver::numbered(1);
        q.add_arrow("x", "1", "1").unwrap();
        assert_eq!(
            build_algebra("k[x]", Q, q, vec![], 10).unwrap_err(),
            AlgebraError::NotFiniteDimensional(10)
        );
    }

    #[test]
    fn invalid_relations() {
        let mut q = Quiver::numbered(3);
        q.add_arrow("a", "1", "2").unwrap();
        q.add_arrow("b", "2", "3").unwrap();
        q.add_arrow("c", "1", "3").unwrap();
        let ab = q.path(&["a", "b"]).unwrap();
        let c = q.path(&["c"]).unwrap();
        assert!(Relation::new(vec![(Q.one(), ab.clone()), (Q.one(), c)]).is_err());
        assert!(Relation::new(vec![(Q.one(), ab.clone()), (-Q.one(), ab)]).is_err());
    }

    #[test]
    fn commutativity_relation() {
        // square 1->2->4, 1->3->4 commuting
        let mut q = Quiver::numbered(4);
        q.add_arrow("a", "1", "2").unwrap();
        q.add_arrow("b", "2", "4").unwrap();
        q.add_arrow("c", "1", "3").unwrap();
        q.add_arrow("d", "3", "4").unwrap();
        let r = Relation::new(vec![
            (Q.one(), q.path(&["a", "b"]).unwrap()),
            (-Q.one(), q.path(&["c", "d"]).unwrap()),
        ])
        .unwrap();
        let a = build_algebra("sq", Q, q, vec![r], 30).unwrap();
        assert_eq!(a.dim(), 4 + 4 + 1);
    }

    #[test]
    fn present_round_trip() {
        let a = a4();
        let sc = a.structure_constants();
        let idem: Vec<_> = (0..4).map(|v| a.idempotent(v)).collect();
        let p = present_algebra("A4'", &sc, &idem, None).unwrap();
        assert_eq!(p.arrows, a.quiver().arrow_count_matrix());
        assert_eq!(p.relations.iter().flatten().sum::<usize>(), 3);
        assert_eq!(p.algebra.dim(), 9);
    }

    #[test]
    fn present_semisimple_and_dual_numbers() {
        let mut sc = StructureConstants::zero_algebra(Q, 2);
        sc.set(0, 0, 0, Q.one());
        sc.set(1, 1, 1, Q.one());
        let p = present_algebra("kxk", &sc, &[unit(Q, 2, 0), unit(Q, 2, 1)], None).unwrap();
        assert_eq!(p.algebra.quiver().arrow_count(), 0);
        assert_eq!(p.algebra.dim(), 2);

        let mut sc = StructureConstants::zero_algebra(Q, 2);
        sc.set(0, 0, 0, Q.one());
        sc.set(0, 1, 1, Q.one());
        sc.set(1, 0, 1, Q.one());
        let p = present_algebra("dual", &sc, &[unit(Q, 2, 0)], None).unwrap();
        assert_eq!(p.arrows, vec![vec![1]]);
        assert_eq!(p.relations, vec![vec![1]]);
    }

    #[test]
    fn non_basic_is_rejected() {
        // 2x2 matrices with the identity as the only idempotent
        let mut sc = StructureConstants::zero_algebra(Q, 4);
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    sc.set(i * 2 + j, j * 2 + l, i * 2 + l, Q.one());
                }
            }
        }
        let one = vec![Q.one(), Q.zero(), Q.zero(), Q.one()];
        assert!(matches!(
            present_algebra("M2", &sc, &[one], None),
            Err(AlgebraError::NotBasic(_))
        ));
    }
}
