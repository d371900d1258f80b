//! Zielonka trees of Muller conditions and the parity transducer on their
//! branches.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type Colour = Vec<u32>;
pub type MinRule = Arc<dyn Fn(&[u32]) -> bool + Send + Sync>;

/// Acceptance predicate on nonempty colour sets.
#[derive(Clone)]
pub enum Predicate {
    /// Accepting sets listed explicitly, as sorted colour indices.
    Family(HashSet<Vec<usize>>),
    /// Acceptance decided by the component-wise minimum of the set.
    MinVector(MinRule),
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Family(s) => write!(f, "Family({} sets)", s.len()),
            Predicate::MinVector(_) => write!(f, "MinVector"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MullerCondition {
    pub colours: Vec<Colour>,
    pub predicate: Predicate,
}

impl MullerCondition {
    /// Condition given by an explicit family of accepting sets.
    pub fn from_family(colours: Vec<Colour>, family: &[Vec<Colour>]) -> Result<Self> {
        let idx: HashMap<&Colour, usize> = colours.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut sets = HashSet::new();
        for s in family {
            if s.is_empty() {
                return Err(Error::Invalid("accepting family contains the empty set".into()));
            }
            let mut v: Vec<usize> = s
                .iter()
                .map(|c| {
                    idx.get(c)
                        .copied()
                        .ok_or_else(|| Error::Invalid(format!("colour {c:?} not in C")))
                })
                .collect::<Result<_>>()?;
            v.sort_unstable();
            v.dedup();
            sets.insert(v);
        }
        Ok(MullerCondition {
            colours,
            predicate: Predicate::Family(sets),
        })
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn index_of(&self, c: &[u32]) -> Option<usize> {
        self.colours.iter().position(|x| x.as_slice() == c)
    }

    pub fn accepts(&self, set: &FixedBitSet) -> bool {
        match &self.predicate {
            Predicate::Family(f) => f.contains(&set.ones().collect::<Vec<_>>()),
            Predicate::MinVector(rule) => rule(&self.min_vector(set)),
        }
    }

    /// Acceptance of an explicit list of colour indices.
    pub fn accepts_indices(&self, set: &[usize]) -> bool {
        let mut b = FixedBitSet::with_capacity(self.len());
        for &i in set {
            b.insert(i);
        }
        self.accepts(&b)
    }

    fn min_vector(&self, set: &FixedBitSet) -> Vec<u32> {
        let k = self.colours.first().map_or(0, |c| c.len());
        let mut m = vec![u32::MAX; k];
        for i in set.ones() {
            for (j, &x) in self.colours[i].iter().enumerate() {
                m[j] = m[j].min(x);
            }
        }
        m
    }
}

fn product(ranges: &[(u32, u32)]) -> Vec<Colour> {
    let mut out: Vec<Colour> = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|c| {
                (lo..=hi).map(move |x| {
                    let mut c2 = c.clone();
                    c2.push(x);
                    c2
                })
            })
            .collect();
    }
    out
}

/// Colours `range_0 × … × range_k`; component 0 is Eve's token, the rest are
/// Adam's. Accepting iff some Adam component has even minimum implies Eve's
/// minimum is even.
pub fn token_condition(ranges: &[(u32, u32)]) -> MullerCondition {
    let rule: MinRule = Arc::new(|m: &[u32]| !m[1..].iter().any(|x| x % 2 == 0) || m[0] % 2 == 0);
    MullerCondition {
        colours: product(ranges),
        predicate: Predicate::MinVector(rule),
    }
}

/// Colours `r1 × r2`, accepting iff an even first minimum implies an even
/// second minimum.
pub fn implication_condition(r1: (u32, u32), r2: (u32, u32)) -> MullerCondition {
    let rule: MinRule = Arc::new(|m: &[u32]| m[0] % 2 == 1 || m[1] % 2 == 0);
    MullerCondition {
        colours: product(&[r1, r2]),
        predicate: Predicate::MinVector(rule),
    }
}

#[derive(Clone, Debug)]
pub struct ZNode {
    pub label: FixedBitSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    pub accepting: bool,
}

/// Ordered Zielonka tree; nodes are stored in preorder.
#[derive(Clone, Debug)]
pub struct ZielonkaTree {
    pub colours: Vec<Colour>,
    pub nodes: Vec<ZNode>,
    /// 0 when the root is accepting, 1 otherwise.
    pub iota: u32,
    leaves: Vec<usize>,
    paths: Vec<Vec<usize>>,
}

impl ZielonkaTree {
    fn from_nodes(colours: Vec<Colour>, nodes: Vec<ZNode>) -> Self {
        let iota = if nodes[0].accepting { 0 } else { 1 };
        let leaves: Vec<usize> = (0..nodes.len()).filter(|&v| nodes[v].children.is_empty()).collect();
        let paths = leaves
            .iter()
            .map(|&l| {
                let mut p = vec![l];
                while let Some(q) = nodes[*p.last().unwrap()].parent {
                    p.push(q);
                }
                p.reverse();
                p
            })
            .collect();
        ZielonkaTree {
            colours,
            nodes,
            iota,
            leaves,
            paths,
        }
    }

    pub fn prioritydepth(&self, node: usize) -> u32 {
        self.nodes[node].depth as u32 + self.iota
    }

    pub fn num_branches(&self) -> usize {
        self.leaves.len()
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn max_prioritydepth(&self) -> u32 {
        self.height() as u32 + self.iota
    }

    /// Node ids from root to the leaf of branch `b`.
    pub fn branch(&self, b: usize) -> &[usize] {
        &self.paths[b]
    }

    pub fn leaf(&self, b: usize) -> usize {
        self.leaves[b]
    }

    /// Index of the leftmost branch through `node`.
    pub fn leftmost_branch(&self, mut node: usize) -> usize {
        while let Some(&c) = self.nodes[node].children.first() {
            node = c;
        }
        self.leaves.binary_search(&node).expect("leaf")
    }

    /// Colour tuples of a node's label.
    pub fn label(&self, node: usize) -> Vec<&Colour> {
        self.nodes[node].label.ones().map(|i| &self.colours[i]).collect()
    }

    /// Distinct labels, i.e. the node count of the Zielonka DAG.
    pub fn distinct_labels(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.label.ones().collect::<Vec<_>>())
            .collect::<HashSet<_>>()
            .len()
    }

    /// One step of the parity transducer: `(priority, next branch)`.
    /// Whether the set holding only colour `c` is accepted.
    pub fn singleton_accepting(&self, c: usize) -> bool {
        let mut node = 0;
        while let Some(&child) = self.nodes[node]
            .children
            .iter()
            .find(|&&ch| self.nodes[ch].label.contains(c))
        {
            node = child;
        }
        self.nodes[node].accepting
    }

    pub fn step(&self, b: usize, colour: usize) -> Result<(u32, usize)> {
        if colour >= self.colours.len() {
            return Err(Error::Invalid(format!("colour {colour} not in C")));
        }
        let path = &self.paths[b];
        let mut k = 0;
        while k + 1 < path.len() && self.nodes[path[k + 1]].label.contains(colour) {
            k += 1;
        }
        let nu = path[k];
        let prio = self.prioritydepth(nu);
        if k + 1 == path.len() {
            return Ok((prio, b));
        }
        let kids = &self.nodes[nu].children;
        let pos = kids.iter().position(|&c| c == path[k + 1]).expect("child on path");
        let sibling = kids[(pos + 1) % kids.len()];
        Ok((prio, self.leftmost_branch(sibling)))
    }

    /// Dense table of [`ZielonkaTree::step`] over all branches and colours.
    pub fn step_table(&self) -> StepTable {
        let nc = self.colours.len();
        let mut table = Vec::with_capacity(self.num_branches() * nc);
        for b in 0..self.num_branches() {
            for c in 0..nc {
                let (p, nb) = self.step(b, c).expect("colour in range");
                table.push((p, nb as u32));
            }
        }
        StepTable { colours: nc, table }
    }

    /// Structural equality: same shape, same labels, same child order.
    pub fn same_shape(&self, other: &ZielonkaTree) -> bool {
        self.colours == other.colours
            && self.nodes.len() == other.nodes.len()
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(a, b)| a.label == b.label && a.children == b.children && a.depth == b.depth)
    }

    /// Lines `node <id> depth <n> pdepth <n> label {...} children <ids>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let label: Vec<String> = n
                .label
                .ones()
                .map(|c| {
                    let t: Vec<String> = self.colours[c].iter().map(|x| x.to_string()).collect();
                    format!("({})", t.join(","))
                })
                .collect();
            let kids: Vec<String> = n.children.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "node {} depth {} pdepth {} label {{{}}} children {}\n",
                i,
                n.depth,
                self.prioritydepth(i),
                label.join(","),
                if kids.is_empty() {
                    "-".to_string()
                } else {
                    kids.join(",")
                }
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct StepTable {
    colours: usize,
    table: Vec<(u32, u32)>,
}

impl StepTable {
    #[inline]
    pub fn get(&self, branch: usize, colour: usize) -> (u32, usize) {
        let (p, b) = self.table[branch * self.colours + colour];
        (p, b as usize)
    }
}

fn canonical_sort(children: &mut [FixedBitSet]) {
    children.sort_by(|a, b| a.ones().cmp(b.ones()));
}

fn maximal_flips(cond: &MullerCondition, x: &FixedBitSet, x_acc: bool) -> Vec<FixedBitSet> {
    let mut cands: Vec<FixedBitSet> = Vec::new();
    match &cond.predicate {
        Predicate::MinVector(_) => {
            let k = cond.colours.first().map_or(0, |c| c.len());
            let mut values: Vec<Vec<u32>> = vec![Vec::new(); k];
            for i in x.ones() {
                for (j, &v) in cond.colours[i].iter().enumerate() {
                    values[j].push(v);
                }
            }
            for v in &mut values {
                v.sort_unstable();
                v.dedup();
            }
            let mut m = vec![0u32; k];
            let mut idx = vec![0usize; k];
            'outer: loop {
                for j in 0..k {
                    m[j] = values[j][idx[j]];
                }
                let mut y = FixedBitSet::with_capacity(cond.len());
                for i in x.ones() {
                    if cond.colours[i].iter().zip(&m).all(|(a, b)| a >= b) {
                        y.insert(i);
                    }
                }
                if y.count_ones(..) > 0 && cond.accepts(&y) != x_acc && !cands.contains(&y) {
                    cands.push(y);
                }
                for j in (0..k).rev() {
                    idx[j] += 1;
                    if idx[j] < values[j].len() {
                        continue 'outer;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
        Predicate::Family(_) => {
            let elems: Vec<usize> = x.ones().collect();
            let n = elems.len();
            let mut masks: Vec<u64> = (1..(1u64 << n)).collect();
            masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
            let mut found: Vec<u64> = Vec::new();
            for m in masks {
                if found.iter().any(|&f| f & m == m) {
                    continue;
                }
                let mut y = FixedBitSet::with_capacity(cond.len());
                for (b, &e) in elems.iter().enumerate() {
                    if m >> b & 1 == 1 {
                        y.insert(e);
                    }
                }
                if cond.accepts(&y) != x_acc {
                    found.push(m);
                    cands.push(y);
                }
            }
        }
    }
    let maximal: Vec<FixedBitSet> = cands
        .iter()
        .filter(|y| !cands.iter().any(|z| z != *y && y.is_subset(z)))
        .cloned()
        .collect();
    let mut out = maximal;
    canonical_sort(&mut out);
    out
}

/// Generic Zielonka tree builder.
pub fn build_tree(cond: &MullerCondition) -> Result<ZielonkaTree> {
    if cond.is_empty() {
        return Err(Error::Invalid("empty colour set".into()));
    }
    if let Predicate::Family(_) = cond.predicate {
        if cond.len() > 20 {
            return Err(Error::Invalid("explicit families are limited to 20 colours".into()));
        }
    }
    let mut root = FixedBitSet::with_capacity(cond.len());
    root.insert_range(..);
    let mut nodes = Vec::new();
    grow(cond, root, None, 0, &mut nodes);
    Ok(ZielonkaTree::from_nodes(cond.colours.clone(), nodes))
}

fn grow(cond: &MullerCondition, label: FixedBitSet, parent: Option<usize>, depth: usize, nodes: &mut Vec<ZNode>) {
    let accepting = cond.accepts(&label);
    let id = nodes.len();
    let kids = maximal_flips(cond, &label, accepting);
    nodes.push(ZNode {
        label,
        parent,
        children: Vec::new(),
        depth,
        accepting,
    });
    for y in kids {
        let c = nodes.len();
        nodes[id].children.push(c);
        grow(cond, y, Some(id), depth + 1, nodes);
    }
}

/// The 2-token condition on `[0,d]³`, its tree built by the box rules, and
/// the label-merged DAG. The rule-built tree is checked against the generic
/// builder.
pub fn build_2token_condition(d: u32) -> Result<(MullerCondition, ZielonkaTree, ZielonkaDag)> {
    let cond = token_condition(&[(0, d), (0, d), (0, d)]);
    let tree = build_2token_tree_by_rules(d);
    let generic = build_tree(&cond)?;
    if !tree.same_shape(&generic) {
        return Err(Error::Internal(format!(
            "box-rule tree differs from generic tree for d={d}"
        )));
    }
    let dag = ZielonkaDag::of(&tree);
    Ok((cond, tree, dag))
}

type BoxLabel = (u32, u32, u32);

fn box_children(d: u32, (x, y, z): BoxLabel) -> Vec<BoxLabel> {
    let even = |v: u32| v % 2 == 0;
    let mut out = Vec::new();
    if even(x) {
        if x < d {
            out.push((x + 1, y, z));
        }
    } else if even(y) && even(z) {
        if x < d {
            out.push((x + 1, y, z));
        }
        if y < d && z < d {
            out.push((x, y + 1, z + 1));
        }
    } else if !even(y) && !even(z) {
        if y < d {
            out.push((x, y + 1, z));
        }
        if z < d {
            out.push((x, y, z + 1));
        }
    } else if even(y) {
        if x < d {
            out.push((x + 1, y, z));
        }
        if y < d {
            out.push((x, y + 1, z));
        }
    } else {
        if x < d {
            out.push((x + 1, y, z));
        }
        if z < d {
            out.push((x, y, z + 1));
        }
    }
    out
}

/// `Z_{[0,d]}` from the box rules for the 2-token condition.
pub fn build_2token_tree_by_rules(d: u32) -> ZielonkaTree {
    let colours = product(&[(0, d), (0, d), (0, d)]);
    let to_set = |(x, y, z): BoxLabel| {
        let mut s = FixedBitSet::with_capacity(colours.len());
        for (i, c) in colours.iter().enumerate() {
            if c[0] >= x && c[1] >= y && c[2] >= z {
                s.insert(i);
            }
        }
        s
    };
    fn rec(
        d: u32,
        b: BoxLabel,
        parent: Option<usize>,
        depth: usize,
        nodes: &mut Vec<ZNode>,
        to_set: &dyn Fn(BoxLabel) -> FixedBitSet,
    ) {
        let id = nodes.len();
        let accepting = b.0 % 2 == 0 || (b.1 % 2 == 1 && b.2 % 2 == 1);
        nodes.push(ZNode {
            label: to_set(b),
            parent,
            children: Vec::new(),
            depth,
            accepting,
        });
        let mut kids = box_children(d, b);
        kids.sort_by(|p, q| to_set(*p).ones().cmp(to_set(*q).ones()));
        for k in kids {
            let c = nodes.len();
            nodes[id].children.push(c);
            rec(d, k, Some(id), depth + 1, nodes, to_set);
        }
    }
    let mut nodes = Vec::new();
    rec(d, (0, 0, 0), None, 0, &mut nodes, &to_set);
    ZielonkaTree::from_nodes(colours, nodes)
}

/// Implication condition on `[0,d1] × [i2, i2+d2]` and its tree.
pub fn build_implication_condition(d1: u32, d2: u32, i2: u32) -> Result<(MullerCondition, ZielonkaTree)> {
    if d1 < 1 || d2 < 1 || i2 > 1 {
        return Err(Error::Invalid("need d1 >= 1, d2 >= 1 and i2 in {0,1}".into()));
    }
    let cond = implication_condition((0, d1), (i2, i2 + d2));
    let tree = build_tree(&cond)?;
    Ok((cond, tree))
}

/// Zielonka tree with equal labels merged.
#[derive(Clone, Debug)]
pub struct ZielonkaDag {
    pub labels: Vec<FixedBitSet>,
    pub edges: Vec<(usize, usize)>,
}

impl ZielonkaDag {
    pub fn of(tree: &ZielonkaTree) -> Self {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut node_id = Vec::with_capacity(tree.nodes.len());
        for n in &tree.nodes {
            let key: Vec<usize> = n.label.ones().collect();
            let id = *ids.entry(key).or_insert_with(|| {
                labels.push(n.label.clone());
                labels.len() - 1
            });
            node_id.push(id);
        }
        let mut edges: Vec<(usize, usize)> = tree
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c)))
            .map(|(i, c)| (node_id[i], node_id[c]))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        ZielonkaDag { labels, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }
}
