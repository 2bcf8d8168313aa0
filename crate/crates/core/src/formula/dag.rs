//! Hash-consed formula graphs. Structurally equal subformulas share one node,
//! so an evaluator memoizing per node reuses work across every formula
//! inserted into the same graph.

use rustc_hash::FxHashMap;

use super::{DepAtom, Formula, Prop};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PropId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DagNode {
    Top,
    Bot,
    Atom(PropId),
    NegAtom(PropId),
    Dep(Box<[PropId]>, PropId),
    NegDep(Box<[PropId]>, PropId),
    And(NodeId, NodeId),
    SplitOr(NodeId, NodeId),
    ClassicalOr(NodeId, NodeId),
    Box(NodeId),
    Diamond(NodeId),
}

/// Children always receive smaller ids than their parents, so iterating ids
/// in increasing order is a bottom-up traversal.
#[derive(Clone, Debug, Default)]
pub struct FormulaDag {
    nodes: Vec<DagNode>,
    index: FxHashMap<DagNode, NodeId>,
    props: Vec<Prop>,
    prop_index: FxHashMap<Prop, PropId>,
    /// Flattened operands of each maximal `|` chain, empty for other nodes.
    disjuncts: Vec<Box<[NodeId]>>,
}

impl FormulaDag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &DagNode {
        &self.nodes[id.index()]
    }

    pub fn props(&self) -> &[Prop] {
        &self.props
    }

    pub fn prop(&self, id: PropId) -> &Prop {
        &self.props[id.index()]
    }

    pub fn intern_prop(&mut self, p: &Prop) -> PropId {
        if let Some(&id) = self.prop_index.get(p) {
            return id;
        }
        let id = PropId(self.props.len() as u32);
        self.props.push(p.clone());
        self.prop_index.insert(p.clone(), id);
        id
    }

    /// Adds a node whose children are already present; returns the existing
    /// id for a structurally equal node.
    pub fn add(&mut self, node: DagNode) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        debug_assert!(match &node {
            DagNode::And(a, b) | DagNode::SplitOr(a, b) | DagNode::ClassicalOr(a, b) =>
                *a < id && *b < id,
            DagNode::Box(a) | DagNode::Diamond(a) => *a < id,
            _ => true,
        });
        let flat: Box<[NodeId]> = match node {
            DagNode::SplitOr(a, b) => self
                .operands(a)
                .iter()
                .chain(self.operands(b).iter())
                .copied()
                .collect(),
            _ => Box::new([]),
        };
        self.disjuncts.push(flat);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    fn operands(&self, id: NodeId) -> std::borrow::Cow<'_, [NodeId]> {
        match self.node(id) {
            DagNode::SplitOr(..) => self.disjuncts[id.index()][..].into(),
            _ => vec![id].into(),
        }
    }

    /// Operands of the `|` chain rooted at `id`, left to right; empty unless
    /// `id` is a split disjunction.
    pub fn disjuncts(&self, id: NodeId) -> &[NodeId] {
        &self.disjuncts[id.index()]
    }

    fn intern_dep(&mut self, d: &DepAtom) -> (Box<[PropId]>, PropId) {
        let dets = d.determiners.iter().map(|p| self.intern_prop(p)).collect();
        (dets, self.intern_prop(&d.target))
    }

    pub fn insert(&mut self, f: &Formula) -> NodeId {
        let node = match f {
            Formula::Top => DagNode::Top,
            Formula::Bot => DagNode::Bot,
            Formula::Atom(p) => DagNode::Atom(self.intern_prop(p)),
            Formula::NegAtom(p) => DagNode::NegAtom(self.intern_prop(p)),
            Formula::Dep(d) => {
                let (dets, t) = self.intern_dep(d);
                DagNode::Dep(dets, t)
            }
            Formula::NegDep(d) => {
                let (dets, t) = self.intern_dep(d);
                DagNode::NegDep(dets, t)
            }
            Formula::And(l, r) => {
                let (l, r) = (self.insert(l), self.insert(r));
                DagNode::And(l, r)
            }
            Formula::SplitOr(l, r) => {
                let (l, r) = (self.insert(l), self.insert(r));
                DagNode::SplitOr(l, r)
            }
            Formula::ClassicalOr(l, r) => {
                let (l, r) = (self.insert(l), self.insert(r));
                DagNode::ClassicalOr(l, r)
            }
            Formula::Box(c) => DagNode::Box(self.insert(c)),
            Formula::Diamond(c) => DagNode::Diamond(self.insert(c)),
        };
        self.add(node)
    }

    /// Unfolds a node back into a tree.
    pub fn to_formula(&self, id: NodeId) -> Formula {
        let dep = |dets: &[PropId], t: PropId| {
            DepAtom::new(
                dets.iter().map(|p| self.prop(*p).clone()).collect(),
                self.prop(t).clone(),
            )
        };
        match self.node(id) {
            DagNode::Top => Formula::Top,
            DagNode::Bot => Formula::Bot,
            DagNode::Atom(p) => Formula::Atom(self.prop(*p).clone()),
            DagNode::NegAtom(p) => Formula::NegAtom(self.prop(*p).clone()),
            DagNode::Dep(d, t) => Formula::Dep(dep(d, *t)),
            DagNode::NegDep(d, t) => Formula::NegDep(dep(d, *t)),
            DagNode::And(a, b) => Formula::and(self.to_formula(*a), self.to_formula(*b)),
            DagNode::SplitOr(a, b) => Formula::split_or(self.to_formula(*a), self.to_formula(*b)),
            DagNode::ClassicalOr(a, b) => {
                Formula::classical_or(self.to_formula(*a), self.to_formula(*b))
            }
            DagNode::Box(a) => Formula::boxed(self.to_formula(*a)),
            DagNode::Diamond(a) => Formula::diamond(self.to_formula(*a)),
        }
    }
}
