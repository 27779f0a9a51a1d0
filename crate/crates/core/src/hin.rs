//! Heterogeneous interaction network: typed nodes, inverse-closed edges
//! with explicit self-loops, per-user temporal sequences, and the
//! bridge/train/test split.
//!
//! The graph is immutable after construction and safe to share read-only
//! across workers.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node type in the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    User,
    Item,
    Brand,
    Category,
}

impl NodeKind {
    pub const ALL: [NodeKind; 4] = [NodeKind::User, NodeKind::Item, NodeKind::Brand, NodeKind::Category];

    pub fn index(self) -> usize {
        match self {
            NodeKind::User => 0,
            NodeKind::Item => 1,
            NodeKind::Brand => 2,
            NodeKind::Category => 3,
        }
    }

    pub fn label(self) -> char {
        match self {
            NodeKind::User => 'u',
            NodeKind::Item => 'i',
            NodeKind::Brand => 'b',
            NodeKind::Category => 'c',
        }
    }

    /// Single-letter scheme label used in explanation summaries (I-B-I etc).
    pub fn scheme_letter(self) -> char {
        self.label().to_ascii_uppercase()
    }

    pub fn from_label(c: char) -> Option<NodeKind> {
        match c {
            'u' => Some(NodeKind::User),
            'i' => Some(NodeKind::Item),
            'b' => Some(NodeKind::Brand),
            'c' => Some(NodeKind::Category),
            _ => None,
        }
    }
}

/// A typed node reference: kind plus dense per-kind index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeRef {
    pub kind: NodeKind,
    pub id: u32,
}

impl NodeRef {
    pub fn new(kind: NodeKind, id: u32) -> Self {
        NodeRef { kind, id }
    }

    pub fn user(id: u32) -> Self {
        NodeRef::new(NodeKind::User, id)
    }

    pub fn item(id: u32) -> Self {
        NodeRef::new(NodeKind::Item, id)
    }

    pub fn brand(id: u32) -> Self {
        NodeRef::new(NodeKind::Brand, id)
    }

    pub fn category(id: u32) -> Self {
        NodeRef::new(NodeKind::Category, id)
    }

    /// Stable 64-bit key, used to derive per-node RNG seeds.
    pub fn key(self) -> u64 {
        ((self.kind.index() as u64) << 32) | self.id as u64
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.label(), self.id)
    }
}

impl FromStr for NodeRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (k, id) = s.split_once(':').ok_or_else(|| format!("bad node ref `{s}`"))?;
        let kind = k
            .chars()
            .next()
            .and_then(NodeKind::from_label)
            .filter(|_| k.len() == 1)
            .ok_or_else(|| format!("bad node kind `{k}`"))?;
        let id = id.parse::<u32>().map_err(|_| format!("bad node id `{id}`"))?;
        Ok(NodeRef { kind, id })
    }
}

/// Edge relation. Inverse edges and per-node self-loops are materialized
/// explicitly so that every node always has at least one outgoing action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    Buy,
    BuyInv,
    IsBrandOf,
    IsBrandOfInv,
    IsCategoryOf,
    IsCategoryOfInv,
    SelfLoop,
}

impl Relation {
    pub fn inverse(self) -> Relation {
        match self {
            Relation::Buy => Relation::BuyInv,
            Relation::BuyInv => Relation::Buy,
            Relation::IsBrandOf => Relation::IsBrandOfInv,
            Relation::IsBrandOfInv => Relation::IsBrandOf,
            Relation::IsCategoryOf => Relation::IsCategoryOfInv,
            Relation::IsCategoryOfInv => Relation::IsCategoryOf,
            Relation::SelfLoop => Relation::SelfLoop,
        }
    }

    /// Buy edges in either direction: the user-item bipartite subgraph.
    pub fn is_user_item(self) -> bool {
        matches!(self, Relation::Buy | Relation::BuyInv)
    }

    pub fn label(self) -> &'static str {
        match self {
            Relation::Buy => "buy",
            Relation::BuyInv => "buy_inv",
            Relation::IsBrandOf => "is_brand_of",
            Relation::IsBrandOfInv => "is_brand_of_inv",
            Relation::IsCategoryOf => "is_category_of",
            Relation::IsCategoryOfInv => "is_category_of_inv",
            Relation::SelfLoop => "self_loop",
        }
    }

    pub fn from_label(s: &str) -> Option<Relation> {
        Some(match s {
            "buy" => Relation::Buy,
            "buy_inv" => Relation::BuyInv,
            "is_brand_of" => Relation::IsBrandOf,
            "is_brand_of_inv" => Relation::IsBrandOfInv,
            "is_category_of" => Relation::IsCategoryOf,
            "is_category_of_inv" => Relation::IsCategoryOfInv,
            "self_loop" => Relation::SelfLoop,
            _ => return None,
        })
    }
}

#[derive(Debug, Error)]
pub enum HinError {
    #[error("unknown node {0}")]
    UnknownNode(NodeRef),
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("sequence for user {user} has {len} items, need at least {need}")]
    TooShort { user: String, len: usize, need: usize },
    #[error("graph invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable heterogeneous multigraph over users, items, brands and
/// categories. Adjacency lists carry forward, inverse and self-loop edges
/// and are sorted by (kind, id, relation) for determinism.
#[derive(Clone, Debug, PartialEq)]
pub struct TypedGraph {
    counts: [u32; 4],
    offsets: [usize; 4],
    adj: Vec<Vec<(Relation, NodeRef)>>,
}

impl TypedGraph {
    pub fn kind_count(&self, kind: NodeKind) -> u32 {
        self.counts[kind.index()]
    }

    pub fn counts(&self) -> [u32; 4] {
        self.counts
    }

    pub fn node_count(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Number of directed edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, v: NodeRef) -> bool {
        v.id < self.counts[v.kind.index()]
    }

    fn slot(&self, v: NodeRef) -> usize {
        self.offsets[v.kind.index()] + v.id as usize
    }

    /// All adjacent (relation, node) pairs, inverse edges and the self-loop
    /// included, in deterministic order.
    pub fn neighbors(&self, v: NodeRef) -> Result<&[(Relation, NodeRef)], HinError> {
        if !self.contains(v) {
            return Err(HinError::UnknownNode(v));
        }
        Ok(&self.adj[self.slot(v)])
    }

    /// Iterate every node in (kind, id) order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        NodeKind::ALL
            .into_iter()
            .flat_map(move |k| (0..self.counts[k.index()]).map(move |id| NodeRef::new(k, id)))
    }

    /// Exhaustive invariant scan: inverse closure and self-loop totality.
    pub fn validate(&self) -> Result<(), HinError> {
        let mut loops = 0usize;
        for v in self.nodes() {
            for &(r, t) in &self.adj[self.slot(v)] {
                if r == Relation::SelfLoop {
                    if t != v {
                        return Err(HinError::Invariant(format!("self-loop at {v} points to {t}")));
                    }
                    loops += 1;
                    continue;
                }
                if !self.contains(t) {
                    return Err(HinError::Invariant(format!("dangling edge {v} -> {t}")));
                }
                let back = (r.inverse(), v);
                if !self.adj[self.slot(t)].contains(&back) {
                    return Err(HinError::Invariant(format!(
                        "missing inverse of ({v}, {}, {t})",
                        r.label()
                    )));
                }
            }
        }
        if loops != self.node_count() {
            return Err(HinError::Invariant(format!(
                "self-loop count {loops} != node count {}",
                self.node_count()
            )));
        }
        Ok(())
    }
}

fn offsets_of(counts: [u32; 4]) -> [usize; 4] {
    let mut offsets = [0usize; 4];
    for k in 1..4 {
        offsets[k] = offsets[k - 1] + counts[k - 1] as usize;
    }
    offsets
}

/// Builds a [`TypedGraph`]: forward edges get their inverses added
/// automatically, every node gets a self-loop, duplicates collapse.
pub struct GraphBuilder {
    counts: [u32; 4],
    offsets: [usize; 4],
    adj: Vec<Vec<(Relation, NodeRef)>>,
}

impl GraphBuilder {
    pub fn new(counts: [u32; 4]) -> Self {
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        GraphBuilder { counts, offsets: offsets_of(counts), adj: vec![Vec::new(); total] }
    }

    fn slot(&self, v: NodeRef) -> usize {
        self.offsets[v.kind.index()] + v.id as usize
    }

    /// Adds a forward edge and its inverse. Panics on out-of-range
    /// endpoints: builder inputs come from interned id maps.
    pub fn add_edge(&mut self, head: NodeRef, rel: Relation, tail: NodeRef) {
        assert!(head.id < self.counts[head.kind.index()], "head {head} out of range");
        assert!(tail.id < self.counts[tail.kind.index()], "tail {tail} out of range");
        assert!(rel != Relation::SelfLoop, "self-loops are added by build()");
        let h = self.slot(head);
        let t = self.slot(tail);
        self.adj[h].push((rel, tail));
        self.adj[t].push((rel.inverse(), head));
    }

    pub fn build(mut self) -> TypedGraph {
        for (k, &count) in self.counts.iter().enumerate() {
            for id in 0..count {
                let v = NodeRef::new(NodeKind::ALL[k], id);
                let s = self.offsets[k] + id as usize;
                self.adj[s].push((Relation::SelfLoop, v));
            }
        }
        for list in &mut self.adj {
            list.sort_by_key(|&(r, t)| (t.kind, t.id, r));
            list.dedup();
        }
        TypedGraph { counts: self.counts, offsets: self.offsets, adj: self.adj }
    }
}

/// One timestamped purchase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interaction {
    pub item: NodeRef,
    pub timestamp: i64,
}

/// Sizes of the leading splits; the test split takes the remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub bridge: usize,
    pub train: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { bridge: 2, train: 4 }
    }
}

impl SplitSpec {
    pub fn min_len(&self) -> usize {
        self.bridge + self.train
    }
}

/// A user's chronologically ordered purchases.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionSequence {
    pub user: NodeRef,
    pub items: Vec<Interaction>,
}

impl InteractionSequence {
    /// Splits into (bridge, train, test) slices, order preserved.
    pub fn split(&self, spec: SplitSpec) -> Result<(&[Interaction], &[Interaction], &[Interaction]), HinError> {
        // A valid split needs at least one test item beyond bridge+train.
        let need = spec.min_len() + 1;
        if self.items.len() < need {
            return Err(HinError::TooShort {
                user: self.user.to_string(),
                len: self.items.len(),
                need,
            });
        }
        let (bridge, rest) = self.items.split_at(spec.bridge);
        let (train, test) = rest.split_at(spec.train);
        Ok((bridge, train, test))
    }

    /// Item refs for bridge + train positions: the model's visible history.
    pub fn history(&self, spec: SplitSpec) -> Vec<NodeRef> {
        self.items.iter().take(spec.min_len()).map(|i| i.item).collect()
    }
}

/// External-id interning: dense per-kind internal ids in first-seen order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdMap {
    names: [Vec<String>; 4],
    index: [HashMap<String, u32>; 4],
}

impl IdMap {
    pub fn intern(&mut self, kind: NodeKind, name: &str) -> NodeRef {
        let k = kind.index();
        if let Some(&id) = self.index[k].get(name) {
            return NodeRef::new(kind, id);
        }
        let id = self.names[k].len() as u32;
        self.names[k].push(name.to_string());
        self.index[k].insert(name.to_string(), id);
        NodeRef::new(kind, id)
    }

    pub fn lookup(&self, kind: NodeKind, name: &str) -> Option<NodeRef> {
        self.index[kind.index()].get(name).map(|&id| NodeRef::new(kind, id))
    }

    pub fn name_of(&self, v: NodeRef) -> Option<&str> {
        self.names[v.kind.index()].get(v.id as usize).map(String::as_str)
    }

    pub fn counts(&self) -> [u32; 4] {
        [0, 1, 2, 3].map(|k| self.names[k].len() as u32)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for kind in NodeKind::ALL {
            for (id, name) in self.names[kind.index()].iter().enumerate() {
                writeln!(w, "{}\t{}\t{}", kind.label(), name, id)?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self, HinError> {
        let mut map = IdMap::default();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (kind, name, id) = match (fields.next(), fields.next(), fields.next()) {
                (Some(k), Some(n), Some(i)) => (k, n, i),
                _ => {
                    return Err(HinError::Parse {
                        file: "id map".into(),
                        line: lineno + 1,
                        msg: "expected kind<TAB>external<TAB>internal".into(),
                    })
                }
            };
            let kind = kind
                .chars()
                .next()
                .and_then(NodeKind::from_label)
                .ok_or_else(|| HinError::Parse {
                    file: "id map".into(),
                    line: lineno + 1,
                    msg: format!("bad kind `{kind}`"),
                })?;
            let expect: u32 = id.parse().map_err(|_| HinError::Parse {
                file: "id map".into(),
                line: lineno + 1,
                msg: format!("bad internal id `{id}`"),
            })?;
            let got = map.intern(kind, name);
            if got.id != expect {
                return Err(HinError::Parse {
                    file: "id map".into(),
                    line: lineno + 1,
                    msg: format!("non-dense internal id {expect} (expected {})", got.id),
                });
            }
        }
        Ok(map)
    }
}

/// Ingestion knobs. `min_interactions` drops users with shorter histories;
/// `max_items_per_user`, when set, keeps only each user's latest N items.
#[derive(Clone, Debug)]
pub struct IngestConfig {
    pub min_interactions: usize,
    pub max_items_per_user: Option<usize>,
    pub split: SplitSpec,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig { min_interactions: 12, max_items_per_user: None, split: SplitSpec::default() }
    }
}

#[derive(Debug)]
pub struct IngestOutput {
    pub graph: TypedGraph,
    pub sequences: Vec<InteractionSequence>,
    pub ids: IdMap,
}

/// Parses the interactions and metadata files and builds the network.
///
/// Interactions: `user<TAB>item<TAB>epoch_seconds`, `#` comments allowed.
/// Metadata: `item<TAB>brand<TAB>category`, empty field = missing.
/// Timestamp ties keep file order. Metadata rows for unknown items are
/// skipped with a warning.
pub fn ingest(interactions: &Path, metadata: &Path, cfg: &IngestConfig) -> Result<IngestOutput, HinError> {
    let rows = parse_interactions(interactions)?;
    let meta = parse_metadata(metadata)?;
    ingest_rows(&rows, &meta, cfg, &interactions.display().to_string())
}

/// A raw interaction row: (user, item, timestamp).
pub type InteractionRow = (String, String, i64);
/// A raw metadata row: (item, brand, category); empty string = missing.
pub type MetadataRow = (String, String, String);

pub fn parse_interactions(path: &Path) -> Result<Vec<InteractionRow>, HinError> {
    let file = std::fs::File::open(path)?;
    let name = path.display().to_string();
    let mut rows = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 3 {
            return Err(HinError::Parse {
                file: name,
                line: lineno + 1,
                msg: format!("expected 3 tab-separated fields, got {}", fields.len()),
            });
        }
        let ts: i64 = fields[2].parse().map_err(|_| HinError::Parse {
            file: name.clone(),
            line: lineno + 1,
            msg: format!("bad timestamp `{}`", fields[2]),
        })?;
        rows.push((fields[0].to_string(), fields[1].to_string(), ts));
    }
    Ok(rows)
}

pub fn parse_metadata(path: &Path) -> Result<Vec<MetadataRow>, HinError> {
    let file = std::fs::File::open(path)?;
    let name = path.display().to_string();
    let mut rows = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 3 {
            return Err(HinError::Parse {
                file: name,
                line: lineno + 1,
                msg: format!("expected 3 tab-separated fields, got {}", fields.len()),
            });
        }
        rows.push((fields[0].to_string(), fields[1].to_string(), fields[2].to_string()));
    }
    Ok(rows)
}

/// Core of [`ingest`], operating on pre-parsed rows.
pub fn ingest_rows(
    rows: &[InteractionRow],
    meta: &[MetadataRow],
    cfg: &IngestConfig,
    source: &str,
) -> Result<IngestOutput, HinError> {
    if rows.is_empty() {
        log::warn!("{source}: no interactions; producing an empty graph");
    }
    let mut per_user_count: HashMap<&str, usize> = HashMap::new();
    for (u, _, _) in rows {
        *per_user_count.entry(u.as_str()).or_insert(0) += 1;
    }

    let mut ids = IdMap::default();
    // events[user_internal] = (item, ts, input order)
    let mut events: Vec<Vec<(NodeRef, i64, usize)>> = Vec::new();
    for (order, (u, i, ts)) in rows.iter().enumerate() {
        if per_user_count[u.as_str()] < cfg.min_interactions {
            continue;
        }
        let user = ids.intern(NodeKind::User, u);
        let item = ids.intern(NodeKind::Item, i);
        if user.id as usize == events.len() {
            events.push(Vec::new());
        }
        events[user.id as usize].push((item, *ts, order));
    }

    let mut sequences = Vec::with_capacity(events.len());
    for (uid, mut evs) in events.into_iter().enumerate() {
        evs.sort_by_key(|&(_, ts, order)| (ts, order));
        if let Some(cap) = cfg.max_items_per_user {
            if evs.len() > cap {
                evs.drain(..evs.len() - cap);
            }
        }
        sequences.push(InteractionSequence {
            user: NodeRef::user(uid as u32),
            items: evs.into_iter().map(|(item, timestamp, _)| Interaction { item, timestamp }).collect(),
        });
    }

    // Attribute edges; brand/category ids are interned in metadata order.
    let mut attr_edges: Vec<(NodeRef, Relation, NodeRef)> = Vec::new();
    for (item_ext, brand_ext, cat_ext) in meta {
        let Some(item) = ids.lookup(NodeKind::Item, item_ext) else {
            log::warn!("metadata for unknown item `{item_ext}`; record skipped");
            continue;
        };
        if !brand_ext.is_empty() {
            let b = ids.intern(NodeKind::Brand, brand_ext);
            attr_edges.push((item, Relation::IsBrandOf, b));
        }
        if !cat_ext.is_empty() {
            let c = ids.intern(NodeKind::Category, cat_ext);
            attr_edges.push((item, Relation::IsCategoryOf, c));
        }
    }

    let mut builder = GraphBuilder::new(ids.counts());
    for seq in &sequences {
        for it in &seq.items {
            builder.add_edge(seq.user, Relation::Buy, it.item);
        }
    }
    for (h, r, t) in attr_edges {
        builder.add_edge(h, r, t);
    }

    Ok(IngestOutput { graph: builder.build(), sequences, ids })
}

/// Writes the graph in the versioned `HINv1` text format: a header with
/// per-kind counts, then one directed edge per line.
pub fn write_graph<W: Write>(g: &TypedGraph, mut w: W) -> std::io::Result<()> {
    let c = g.counts();
    writeln!(w, "HINv1 {} {} {} {}", c[0], c[1], c[2], c[3])?;
    for v in g.nodes() {
        for &(r, t) in g.neighbors(v).expect("iterating own nodes") {
            writeln!(w, "{v}\t{}\t{t}", r.label())?;
        }
    }
    Ok(())
}

pub fn read_graph<R: BufRead>(r: R) -> Result<TypedGraph, HinError> {
    let mut lines = r.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let mut parts = header.split_whitespace();
    if parts.next() != Some("HINv1") {
        return Err(HinError::Parse { file: "graph".into(), line: 1, msg: "missing HINv1 header".into() });
    }
    let mut counts = [0u32; 4];
    for slot in counts.iter_mut() {
        *slot = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| HinError::Parse { file: "graph".into(), line: 1, msg: "bad header counts".into() })?;
    }
    let offsets = offsets_of(counts);
    let total: usize = counts.iter().map(|&c| c as usize).sum();
    let mut adj: Vec<Vec<(Relation, NodeRef)>> = vec![Vec::new(); total];
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| HinError::Parse { file: "graph".into(), line: lineno + 2, msg };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 3 fields, got {}", fields.len())));
        }
        let head: NodeRef = fields[0].parse().map_err(parse_err)?;
        let rel = Relation::from_label(fields[1])
            .ok_or_else(|| parse_err(format!("unknown relation `{}`", fields[1])))?;
        let tail: NodeRef = fields[2].parse().map_err(parse_err)?;
        if head.id >= counts[head.kind.index()] || tail.id >= counts[tail.kind.index()] {
            return Err(parse_err(format!("edge endpoint out of range: {head} -> {tail}")));
        }
        adj[offsets[head.kind.index()] + head.id as usize].push((rel, tail));
    }
    let g = TypedGraph { counts, offsets, adj };
    g.validate()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    /// u0 buys i0, i0 has brand b0: 2 forward + 2 inverse + 3 self-loops.
    fn toy() -> TypedGraph {
        let mut b = GraphBuilder::new([1, 1, 1, 0]);
        b.add_edge(NodeRef::user(0), Relation::Buy, NodeRef::item(0));
        b.add_edge(NodeRef::item(0), Relation::IsBrandOf, NodeRef::brand(0));
        b.build()
    }

    #[test]
    fn toy_graph_has_seven_edges() {
        let g = toy();
        assert_eq!(g.edge_count(), 7);
        g.validate().unwrap();
    }

    #[test]
    fn neighbors_of_item_include_inverse_buy_brand_and_self_loop() {
        let g = toy();
        let n = g.neighbors(NodeRef::item(0)).unwrap();
        assert_eq!(
            n,
            &[
                (Relation::BuyInv, NodeRef::user(0)),
                (Relation::SelfLoop, NodeRef::item(0)),
                (Relation::IsBrandOf, NodeRef::brand(0)),
            ]
        );
    }

    #[test]
    fn neighbors_of_user_are_buy_and_self_loop() {
        let g = toy();
        let n = g.neighbors(NodeRef::user(0)).unwrap();
        assert_eq!(n, &[(Relation::SelfLoop, NodeRef::user(0)), (Relation::Buy, NodeRef::item(0))]);
    }

    #[test]
    fn isolated_node_keeps_only_its_self_loop() {
        let g = GraphBuilder::new([0, 0, 0, 1]).build();
        let n = g.neighbors(NodeRef::category(0)).unwrap();
        assert_eq!(n, &[(Relation::SelfLoop, NodeRef::category(0))]);
    }

    #[test]
    fn unknown_node_is_an_error_naming_it() {
        let g = toy();
        let err = g.neighbors(NodeRef::item(9)).unwrap_err();
        assert!(err.to_string().contains("i:9"));
    }

    fn seq(n: usize) -> InteractionSequence {
        InteractionSequence {
            user: NodeRef::user(0),
            items: (0..n).map(|k| Interaction { item: NodeRef::item(k as u32), timestamp: k as i64 }).collect(),
        }
    }

    #[test]
    fn split_twelve_items_into_2_4_6() {
        let s = seq(12);
        let (b, t, e) = s.split(SplitSpec::default()).unwrap();
        assert_eq!((b.len(), t.len(), e.len()), (2, 4, 6));
    }

    #[test]
    fn split_fifteen_items_into_2_4_9() {
        let s = seq(15);
        let (b, t, e) = s.split(SplitSpec::default()).unwrap();
        assert_eq!((b.len(), t.len(), e.len()), (2, 4, 9));
    }

    #[test]
    fn split_six_items_with_configured_1_2_spec() {
        let s = seq(6);
        let (b, t, e) = s.split(SplitSpec { bridge: 1, train: 2 }).unwrap();
        assert_eq!((b.len(), t.len(), e.len()), (1, 2, 3));
    }

    #[test]
    fn split_too_short_names_the_user() {
        let s = seq(5);
        let err = s.split(SplitSpec::default()).unwrap_err();
        assert!(err.to_string().contains("u:0"));
    }

    #[test]
    fn split_partition_is_disjoint_and_ordered() {
        let s = seq(13);
        let (b, t, e) = s.split(SplitSpec::default()).unwrap();
        let rejoined: Vec<_> = b.iter().chain(t).chain(e).cloned().collect();
        assert_eq!(rejoined, s.items);
    }

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write as _;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn ingest_builds_sequences_and_graph() {
        let inter = write_tmp(
            "# comment\nu0\ti0\t100\nu0\ti1\t200\nu0\ti2\t300\nu0\ti3\t400\nu0\ti4\t500\nu0\ti5\t600\n",
        );
        let meta = write_tmp("i0\tb0\tc0\ni1\tb0\t\nighost\tb1\tc1\n");
        let cfg = IngestConfig { min_interactions: 6, ..Default::default() };
        let out = ingest(inter.path(), meta.path(), &cfg).unwrap();
        assert_eq!(out.sequences.len(), 1);
        assert_eq!(out.sequences[0].items.len(), 6);
        // ghost metadata row skipped; b1/c1 never interned
        assert_eq!(out.graph.kind_count(NodeKind::Brand), 1);
        assert_eq!(out.graph.kind_count(NodeKind::Category), 1);
        out.graph.validate().unwrap();
        // i1 has a brand edge but no category edge
        let n1 = out.graph.neighbors(NodeRef::item(1)).unwrap();
        assert!(n1.iter().any(|&(r, _)| r == Relation::IsBrandOf));
        assert!(!n1.iter().any(|&(r, _)| r == Relation::IsCategoryOf));
    }

    #[test]
    fn ingest_drops_short_users_and_their_edges() {
        let mut lines = String::new();
        for k in 0..12 {
            lines.push_str(&format!("alice\ta{k}\t{}\n", 100 + k));
        }
        lines.push_str("bob\tz0\t50\n");
        let inter = write_tmp(&lines);
        let meta = write_tmp("");
        let out = ingest(inter.path(), meta.path(), &IngestConfig::default()).unwrap();
        assert_eq!(out.sequences.len(), 1);
        assert_eq!(out.graph.kind_count(NodeKind::User), 1);
        assert_eq!(out.graph.kind_count(NodeKind::Item), 12);
        assert!(out.ids.lookup(NodeKind::Item, "z0").is_none());
    }

    #[test]
    fn ingest_empty_file_gives_empty_graph_and_sequences() {
        let inter = write_tmp("");
        let meta = write_tmp("");
        let out = ingest(inter.path(), meta.path(), &IngestConfig::default()).unwrap();
        assert_eq!(out.graph.node_count(), 0);
        assert!(out.sequences.is_empty());
    }

    #[test]
    fn ingest_reports_malformed_line_number() {
        let inter = write_tmp("u0\ti0\t100\nu0\ti1\n");
        let meta = write_tmp("");
        let err = ingest(inter.path(), meta.path(), &IngestConfig { min_interactions: 1, ..Default::default() })
            .unwrap_err();
        assert!(err.to_string().contains(":2:"), "got: {err}");
    }

    #[test]
    fn ingest_breaks_timestamp_ties_by_input_order() {
        let inter = write_tmp("u0\tfirst\t100\nu0\tsecond\t100\nu0\tthird\t100\n");
        let meta = write_tmp("");
        let cfg = IngestConfig { min_interactions: 1, ..Default::default() };
        let out = ingest(inter.path(), meta.path(), &cfg).unwrap();
        let items: Vec<_> = out.sequences[0].items.iter().map(|i| i.item.id).collect();
        assert_eq!(items, vec![0, 1, 2]);
    }

    #[test]
    fn ingest_cap_keeps_latest_items() {
        let inter = write_tmp("u0\told\t1\nu0\tmid\t2\nu0\tnew\t3\n");
        let meta = write_tmp("");
        let cfg = IngestConfig { min_interactions: 1, max_items_per_user: Some(2), ..Default::default() };
        let out = ingest(inter.path(), meta.path(), &cfg).unwrap();
        let names: Vec<_> =
            out.sequences[0].items.iter().map(|i| out.ids.name_of(i.item).unwrap().to_string()).collect();
        assert_eq!(names, vec!["mid", "new"]);
    }

    #[test]
    fn graph_serialization_round_trips_and_is_deterministic() {
        let g = toy();
        let mut buf1 = Vec::new();
        write_graph(&g, &mut buf1).unwrap();
        let g2 = read_graph(Cursor::new(&buf1)).unwrap();
        let mut buf2 = Vec::new();
        write_graph(&g2, &mut buf2).unwrap();
        assert_eq!(buf1, buf2);
        assert_eq!(g, g2);
    }

    #[test]
    fn id_map_round_trips() {
        let mut ids = IdMap::default();
        ids.intern(NodeKind::User, "alice");
        ids.intern(NodeKind::Item, "guitar");
        ids.intern(NodeKind::Item, "strings");
        let mut buf = Vec::new();
        ids.write_to(&mut buf).unwrap();
        let back = IdMap::read_from(Cursor::new(&buf)).unwrap();
        assert_eq!(ids, back);
    }

    #[test]
    fn node_ref_parses_and_displays() {
        let v: NodeRef = "b:17".parse().unwrap();
        assert_eq!(v, NodeRef::brand(17));
        assert_eq!(v.to_string(), "b:17");
        assert!("x:1".parse::<NodeRef>().is_err());
    }
}
