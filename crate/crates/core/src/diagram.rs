//! String diagrams as combinatorial open graphs, and structural equality.
//!
//! A [`Diagram`] has generator nodes with ordered ports, two ordered
//! boundaries, and wires, each connecting exactly one source (a diagram input
//! or a node output port) to exactly one sink (a diagram output or a node
//! input port). Identities and braidings introduce no nodes, only wiring, so
//! two terms denote the same morphism of the free symmetric strict monoidal
//! category exactly when their diagrams are isomorphic by a label-preserving
//! node bijection that fixes both boundaries pointwise. [`diagram_equal`]
//! decides that. The boundaries anchor the search: every node reachable from
//! a boundary is matched by forced propagation, and only floating scalar
//! components (wired to neither boundary) need backtracking.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::TypeError;
use crate::term::{typecheck, MorphismTerm};
use crate::theory::{Atom, ObjectWord, Theory};

/// How a node is drawn. Structural equality compares it along with the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum NodeKind {
    /// An ordinary generator box.
    #[default]
    Box,
    /// A regrouping merge junction.
    Merge,
    /// A regrouping fork junction.
    Fork,
    /// A change-of-ownership bar.
    Transfer,
}

/// A wire label: text plus an optional colour key (an owner name in owned
/// diagrams, absent in base diagrams).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireLabel {
    pub text: String,
    pub colour: Option<String>,
}

impl WireLabel {
    pub fn atom(name: impl Into<String>) -> Self {
        WireLabel {
            text: name.into(),
            colour: None,
        }
    }

    pub fn coloured(text: impl Into<String>, colour: impl Into<String>) -> Self {
        WireLabel {
            text: text.into(),
            colour: Some(colour.into()),
        }
    }
}

impl fmt::Display for WireLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A generator instance with ordered, labelled ports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramNode {
    pub label: String,
    pub kind: NodeKind,
    pub in_labels: Vec<WireLabel>,
    pub out_labels: Vec<WireLabel>,
}

/// The source end of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireSrc {
    /// Position on the input boundary.
    Input(usize),
    /// Output port `1` of node `0`.
    NodeOut(usize, usize),
}

/// The sink end of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireDst {
    /// Position on the output boundary.
    Output(usize),
    /// Input port `1` of node `0`.
    NodeIn(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wire {
    pub src: WireSrc,
    pub dst: WireDst,
}

/// Why a candidate diagram is not well-formed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("port is not attached to exactly one wire")]
    PortWiring,
    #[error("wire endpoints carry different labels")]
    LabelMismatch,
    #[error("node adjacency is cyclic")]
    Cyclic,
}

/// A string diagram. Immutable after construction; validation happens in
/// [`Diagram::new`], so any held value is well-formed.
#[derive(Debug, Clone)]
pub struct Diagram {
    nodes: Vec<DiagramNode>,
    wires: Vec<Wire>,
    inputs: Vec<WireLabel>,
    outputs: Vec<WireLabel>,
    // Derived port-to-wire indexes.
    input_wire: Vec<usize>,
    output_wire: Vec<usize>,
    node_in_wire: Vec<Vec<usize>>,
    node_out_wire: Vec<Vec<usize>>,
}

impl Diagram {
    pub fn new(
        nodes: Vec<DiagramNode>,
        wires: Vec<Wire>,
        inputs: Vec<WireLabel>,
        outputs: Vec<WireLabel>,
    ) -> Result<Self, DiagramError> {
        const UNSET: usize = usize::MAX;
        let mut input_wire = vec![UNSET; inputs.len()];
        let mut output_wire = vec![UNSET; outputs.len()];
        let mut node_in_wire: Vec<Vec<usize>> =
            nodes.iter().map(|n| vec![UNSET; n.in_labels.len()]).collect();
        let mut node_out_wire: Vec<Vec<usize>> =
            nodes.iter().map(|n| vec![UNSET; n.out_labels.len()]).collect();

        let set = |slot: &mut usize, w: usize| {
            if *slot != UNSET {
                return Err(DiagramError::PortWiring);
            }
            *slot = w;
            Ok(())
        };
        for (w, wire) in wires.iter().enumerate() {
            let src_label = match wire.src {
                WireSrc::Input(i) => inputs.get(i).ok_or(DiagramError::PortWiring)?,
                WireSrc::NodeOut(n, p) => {
                    let node = nodes.get(n).ok_or(DiagramError::PortWiring)?;
                    node.out_labels.get(p).ok_or(DiagramError::PortWiring)?
                }
            };
            let dst_label = match wire.dst {
                WireDst::Output(j) => outputs.get(j).ok_or(DiagramError::PortWiring)?,
                WireDst::NodeIn(n, p) => {
                    let node = nodes.get(n).ok_or(DiagramError::PortWiring)?;
                    node.in_labels.get(p).ok_or(DiagramError::PortWiring)?
                }
            };
            if src_label != dst_label {
                return Err(DiagramError::LabelMismatch);
            }
            match wire.src {
                WireSrc::Input(i) => set(&mut input_wire[i], w)?,
                WireSrc::NodeOut(n, p) => set(&mut node_out_wire[n][p], w)?,
            }
            match wire.dst {
                WireDst::Output(j) => set(&mut output_wire[j], w)?,
                WireDst::NodeIn(n, p) => set(&mut node_in_wire[n][p], w)?,
            }
        }
        if input_wire.iter().any(|&w| w == UNSET)
            || output_wire.iter().any(|&w| w == UNSET)
            || node_in_wire.iter().flatten().any(|&w| w == UNSET)
            || node_out_wire.iter().flatten().any(|&w| w == UNSET)
        {
            return Err(DiagramError::PortWiring);
        }

        let d = Diagram {
            nodes,
            wires,
            inputs,
            outputs,
            input_wire,
            output_wire,
            node_in_wire,
            node_out_wire,
        };
        if d.toposort().is_none() {
            return Err(DiagramError::Cyclic);
        }
        Ok(d)
    }

    pub fn nodes(&self) -> &[DiagramNode] {
        &self.nodes
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn inputs(&self) -> &[WireLabel] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireLabel] {
        &self.outputs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    /// Wire arriving at input position `i` of the diagram.
    pub fn wire_at_input(&self, i: usize) -> &Wire {
        &self.wires[self.input_wire[i]]
    }

    /// Wire leaving at output position `j` of the diagram.
    pub fn wire_at_output(&self, j: usize) -> &Wire {
        &self.wires[self.output_wire[j]]
    }

    pub fn wire_into_node(&self, node: usize, port: usize) -> usize {
        self.node_in_wire[node][port]
    }

    pub fn wire_out_of_node(&self, node: usize, port: usize) -> usize {
        self.node_out_wire[node][port]
    }

    /// Nodes feeding node `n` directly.
    fn preds(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.node_in_wire[n].iter().filter_map(move |&w| {
            match self.wires[w].src {
                WireSrc::NodeOut(m, _) => Some(m),
                WireSrc::Input(_) => None,
            }
        })
    }

    /// Topological order of nodes, or None if the adjacency is cyclic.
    fn toposort(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for m in 0..n {
            for p in self.preds(m) {
                let _ = p;
                indeg[m] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&m| indeg[m] == 0).collect();
        let mut order = Vec::with_capacity(n);
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for m in 0..n {
            for p in self.preds(m) {
                succ[p].push(m);
            }
        }
        while let Some(m) = queue.pop() {
            order.push(m);
            for &s in &succ[m] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    queue.push(s);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Longest-path layer of each node, counted from the top boundary.
    pub fn layers(&self) -> Vec<usize> {
        let order = self.toposort().expect("diagrams are acyclic by construction");
        let mut layer = vec![0usize; self.nodes.len()];
        for n in order {
            layer[n] = self.preds(n).map(|p| layer[p] + 1).max().unwrap_or(0);
        }
        layer
    }

    /// A cheap isomorphism-invariant key: equal diagrams share it, and it
    /// separates most unequal ones. Stable only within a process.
    pub fn iso_key(&self) -> u64 {
        fn h<T: Hash>(t: &T) -> u64 {
            let mut s = DefaultHasher::new();
            t.hash(&mut s);
            s.finish()
        }
        let mut colour: Vec<u64> = self
            .nodes
            .iter()
            .map(|n| h(&(&n.label, n.kind, &n.in_labels, &n.out_labels)))
            .collect();
        for _ in 0..3 {
            let prev = colour.clone();
            for (n, c) in colour.iter_mut().enumerate() {
                let ins: Vec<u64> = self.node_in_wire[n]
                    .iter()
                    .map(|&w| match self.wires[w].src {
                        WireSrc::Input(i) => h(&("in", i)),
                        WireSrc::NodeOut(m, q) => h(&("n", prev[m], q)),
                    })
                    .collect();
                let outs: Vec<u64> = self.node_out_wire[n]
                    .iter()
                    .map(|&w| match self.wires[w].dst {
                        WireDst::Output(j) => h(&("out", j)),
                        WireDst::NodeIn(m, q) => h(&("n", prev[m], q)),
                    })
                    .collect();
                *c = h(&(prev[n], ins, outs));
            }
        }
        let mut sorted = colour;
        sorted.sort_unstable();
        let boundary: Vec<u64> = self
            .inputs
            .iter()
            .enumerate()
            .map(|(i, _)| match self.wires[self.input_wire[i]].dst {
                WireDst::Output(j) => h(&("io", i, j)),
                WireDst::NodeIn(_, q) => h(&("ip", i, q)),
            })
            .collect();
        h(&(&self.inputs, &self.outputs, sorted, boundary))
    }
}

/// Decides structural equality: is there a bijection of nodes preserving
/// generator labels and all wire connectivity, with both boundaries fixed
/// pointwise?
pub fn diagram_equal(d1: &Diagram, d2: &Diagram) -> bool {
    if d1.inputs != d2.inputs || d1.outputs != d2.outputs {
        return false;
    }
    if d1.nodes.len() != d2.nodes.len() || d1.wires.len() != d2.wires.len() {
        return false;
    }
    {
        let mut l1: Vec<_> = d1.nodes.iter().map(|n| (&n.label, n.kind)).collect();
        let mut l2: Vec<_> = d2.nodes.iter().map(|n| (&n.label, n.kind)).collect();
        l1.sort();
        l2.sort();
        if l1 != l2 {
            return false;
        }
    }

    let n = d1.nodes.len();
    let mut fwd: Vec<Option<usize>> = vec![None; n];
    let mut bwd: Vec<Option<usize>> = vec![None; n];
    let mut queue: Vec<(usize, usize)> = Vec::new();

    let force = |a: usize,
                     b: usize,
                     fwd: &mut Vec<Option<usize>>,
                     bwd: &mut Vec<Option<usize>>,
                     queue: &mut Vec<(usize, usize)>|
     -> bool {
        match (fwd[a], bwd[b]) {
            (None, None) => {
                if d1.nodes[a].label != d2.nodes[b].label
                    || d1.nodes[a].kind != d2.nodes[b].kind
                    || d1.nodes[a].in_labels != d2.nodes[b].in_labels
                    || d1.nodes[a].out_labels != d2.nodes[b].out_labels
                {
                    return false;
                }
                fwd[a] = Some(b);
                bwd[b] = Some(a);
                queue.push((a, b));
                true
            }
            (Some(x), _) if x == b => true,
            _ => false,
        }
    };

    // Seed from both boundaries.
    for i in 0..d1.inputs.len() {
        match (d1.wire_at_input(i).dst, d2.wire_at_input(i).dst) {
            (WireDst::Output(j), WireDst::Output(k)) => {
                if j != k {
                    return false;
                }
            }
            (WireDst::NodeIn(a, p), WireDst::NodeIn(b, q)) => {
                if p != q || !force(a, b, &mut fwd, &mut bwd, &mut queue) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    for j in 0..d1.outputs.len() {
        match (d1.wire_at_output(j).src, d2.wire_at_output(j).src) {
            (WireSrc::Input(_), WireSrc::Input(_)) => {} // handled above
            (WireSrc::NodeOut(a, p), WireSrc::NodeOut(b, q)) => {
                if p != q || !force(a, b, &mut fwd, &mut bwd, &mut queue) {
                    return false;
                }
            }
            _ => return false,
        }
    }

    // Propagate: a matched pair forces all neighbours.
    let mut cursor = 0;
    while cursor < queue.len() {
        let (a, b) = queue[cursor];
        cursor += 1;
        for p in 0..d1.nodes[a].in_labels.len() {
            let w1 = &d1.wires[d1.node_in_wire[a][p]];
            let w2 = &d2.wires[d2.node_in_wire[b][p]];
            match (w1.src, w2.src) {
                (WireSrc::Input(i), WireSrc::Input(k)) => {
                    if i != k {
                        return false;
                    }
                }
                (WireSrc::NodeOut(m1, q1), WireSrc::NodeOut(m2, q2)) => {
                    if q1 != q2 || !force(m1, m2, &mut fwd, &mut bwd, &mut queue) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        for p in 0..d1.nodes[a].out_labels.len() {
            let w1 = &d1.wires[d1.node_out_wire[a][p]];
            let w2 = &d2.wires[d2.node_out_wire[b][p]];
            match (w1.dst, w2.dst) {
                (WireDst::Output(j), WireDst::Output(k)) => {
                    if j != k {
                        return false;
                    }
                }
                (WireDst::NodeIn(m1, q1), WireDst::NodeIn(m2, q2)) => {
                    if q1 != q2 || !force(m1, m2, &mut fwd, &mut bwd, &mut queue) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }

    // Whatever is left floats free of both boundaries: match by backtracking.
    let rest1: Vec<usize> = (0..n).filter(|&a| fwd[a].is_none()).collect();
    let rest2: Vec<usize> = (0..n).filter(|&b| bwd[b].is_none()).collect();
    if rest1.len() != rest2.len() {
        return false;
    }
    if rest1.is_empty() {
        return true;
    }
    backtrack_leftovers(d1, d2, &rest1, &rest2, &mut fwd, &mut bwd, 0)
}

fn consistent_so_far(d1: &Diagram, d2: &Diagram, a: usize, b: usize, fwd: &[Option<usize>]) -> bool {
    if d1.nodes[a].label != d2.nodes[b].label
        || d1.nodes[a].kind != d2.nodes[b].kind
        || d1.nodes[a].in_labels != d2.nodes[b].in_labels
        || d1.nodes[a].out_labels != d2.nodes[b].out_labels
    {
        return false;
    }
    // Check wires touching `a` whose other endpoint is already matched.
    for p in 0..d1.nodes[a].in_labels.len() {
        let w1 = &d1.wires[d1.node_in_wire[a][p]];
        let w2 = &d2.wires[d2.node_in_wire[b][p]];
        match (w1.src, w2.src) {
            (WireSrc::NodeOut(m1, q1), WireSrc::NodeOut(m2, q2)) => {
                if let Some(mapped) = fwd[m1] {
                    if mapped != m2 || q1 != q2 {
                        return false;
                    }
                }
            }
            (WireSrc::Input(_), _) | (_, WireSrc::Input(_)) => return false,
        }
    }
    for p in 0..d1.nodes[a].out_labels.len() {
        let w1 = &d1.wires[d1.node_out_wire[a][p]];
        let w2 = &d2.wires[d2.node_out_wire[b][p]];
        match (w1.dst, w2.dst) {
            (WireDst::NodeIn(m1, q1), WireDst::NodeIn(m2, q2)) => {
                if let Some(mapped) = fwd[m1] {
                    if mapped != m2 || q1 != q2 {
                        return false;
                    }
                }
            }
            (WireDst::Output(_), _) | (_, WireDst::Output(_)) => return false,
        }
    }
    true
}

fn backtrack_leftovers(
    d1: &Diagram,
    d2: &Diagram,
    rest1: &[usize],
    rest2: &[usize],
    fwd: &mut Vec<Option<usize>>,
    bwd: &mut Vec<Option<usize>>,
    depth: usize,
) -> bool {
    if depth == rest1.len() {
        return true;
    }
    let a = rest1[depth];
    for &b in rest2 {
        if bwd[b].is_some() {
            continue;
        }
        if consistent_so_far(d1, d2, a, b, fwd) {
            fwd[a] = Some(b);
            bwd[b] = Some(a);
            if backtrack_leftovers(d1, d2, rest1, rest2, fwd, bwd, depth + 1) {
                return true;
            }
            fwd[a] = None;
            bwd[b] = None;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Term-to-diagram construction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
pub(crate) enum FSrc {
    In(usize),
    Node(usize, usize),
}

#[derive(Clone, Copy)]
pub(crate) enum FDst {
    Out(usize),
    Node(usize, usize),
}

pub(crate) struct Frag {
    nodes: Vec<DiagramNode>,
    wires: Vec<(FSrc, FDst)>,
    in_links: Vec<FDst>,
    out_links: Vec<FSrc>,
    in_labels: Vec<WireLabel>,
    out_labels: Vec<WireLabel>,
}

impl Frag {
    pub(crate) fn id(labels: Vec<WireLabel>) -> Frag {
        Frag {
            nodes: Vec::new(),
            wires: Vec::new(),
            in_links: (0..labels.len()).map(FDst::Out).collect(),
            out_links: (0..labels.len()).map(FSrc::In).collect(),
            in_labels: labels.clone(),
            out_labels: labels,
        }
    }

    pub(crate) fn sym(left: Vec<WireLabel>, right: Vec<WireLabel>) -> Frag {
        let (l, r) = (left.len(), right.len());
        let mut in_links = Vec::with_capacity(l + r);
        for i in 0..l {
            in_links.push(FDst::Out(r + i));
        }
        for j in 0..r {
            in_links.push(FDst::Out(j));
        }
        let mut out_links = Vec::with_capacity(l + r);
        for j in 0..r {
            out_links.push(FSrc::In(l + j));
        }
        for i in 0..l {
            out_links.push(FSrc::In(i));
        }
        let mut in_labels = left.clone();
        in_labels.extend(right.clone());
        let mut out_labels = right;
        out_labels.extend(left);
        Frag {
            nodes: Vec::new(),
            wires: Vec::new(),
            in_links,
            out_links,
            in_labels,
            out_labels,
        }
    }

    pub(crate) fn node(node: DiagramNode) -> Frag {
        let in_labels = node.in_labels.clone();
        let out_labels = node.out_labels.clone();
        Frag {
            in_links: (0..in_labels.len()).map(|p| FDst::Node(0, p)).collect(),
            out_links: (0..out_labels.len()).map(|p| FSrc::Node(0, p)).collect(),
            nodes: vec![node],
            wires: Vec::new(),
            in_labels,
            out_labels,
        }
    }

    fn shift_src(s: FSrc, nodes: usize, ins: usize) -> FSrc {
        match s {
            FSrc::In(i) => FSrc::In(i + ins),
            FSrc::Node(n, p) => FSrc::Node(n + nodes, p),
        }
    }

    fn shift_dst(d: FDst, nodes: usize, outs: usize) -> FDst {
        match d {
            FDst::Out(j) => FDst::Out(j + outs),
            FDst::Node(n, p) => FDst::Node(n + nodes, p),
        }
    }

    pub(crate) fn par(mut self, other: Frag) -> Frag {
        let dn = self.nodes.len();
        let din = self.in_labels.len();
        let dout = self.out_labels.len();
        self.nodes.extend(other.nodes);
        self.wires.extend(other.wires.into_iter().map(|(s, d)| {
            (Frag::shift_src(s, dn, din), Frag::shift_dst(d, dn, dout))
        }));
        self.in_links.extend(
            other
                .in_links
                .into_iter()
                .map(|d| Frag::shift_dst(d, dn, dout)),
        );
        self.out_links.extend(
            other
                .out_links
                .into_iter()
                .map(|s| Frag::shift_src(s, dn, din)),
        );
        self.in_labels.extend(other.in_labels);
        self.out_labels.extend(other.out_labels);
        self
    }

    pub(crate) fn seq(self, other: Frag) -> Frag {
        debug_assert_eq!(self.out_labels, other.in_labels);
        let dn = self.nodes.len();
        let mut nodes = self.nodes;
        nodes.extend(other.nodes);
        let glue_in: Vec<FDst> = other
            .in_links
            .iter()
            .map(|&d| Frag::shift_dst(d, dn, 0))
            .collect();
        let mut wires = self.wires;
        wires.extend(
            other
                .wires
                .into_iter()
                .map(|(s, d)| (Frag::shift_src(s, dn, 0), Frag::shift_dst(d, dn, 0))),
        );
        // Resolve the interface: every output of self meets an input of other.
        // Node-to-node meetings become wires; anything passing through either
        // fragment re-targets the composite's links.
        let mut in_links = Vec::with_capacity(self.in_links.len());
        for &link in &self.in_links {
            in_links.push(match link {
                FDst::Node(b, q) => FDst::Node(b, q),
                FDst::Out(k) => glue_in[k],
            });
        }
        let mut out_links = Vec::with_capacity(other.out_links.len());
        for &link in &other.out_links {
            out_links.push(match link {
                FSrc::Node(a, p) => FSrc::Node(a + dn, p),
                FSrc::In(k) => self.out_links[k],
            });
        }
        for (k, &src) in self.out_links.iter().enumerate() {
            if let (FSrc::Node(a, p), FDst::Node(b, q)) = (src, glue_in[k]) {
                wires.push((FSrc::Node(a, p), FDst::Node(b, q)));
            }
        }
        Frag {
            nodes,
            wires,
            in_links,
            out_links,
            in_labels: self.in_labels,
            out_labels: other.out_labels,
        }
    }

    pub(crate) fn into_diagram(self) -> Diagram {
        let mut wires: Vec<Wire> = Vec::with_capacity(self.wires.len() + self.in_labels.len());
        for (s, d) in &self.wires {
            let src = match *s {
                FSrc::In(_) => unreachable!("interior wires never start at the boundary"),
                FSrc::Node(n, p) => WireSrc::NodeOut(n, p),
            };
            let dst = match *d {
                FDst::Out(_) => unreachable!("interior wires never end at the boundary"),
                FDst::Node(n, p) => WireDst::NodeIn(n, p),
            };
            wires.push(Wire { src, dst });
        }
        for (i, link) in self.in_links.iter().enumerate() {
            let dst = match *link {
                FDst::Out(j) => WireDst::Output(j),
                FDst::Node(n, p) => WireDst::NodeIn(n, p),
            };
            wires.push(Wire {
                src: WireSrc::Input(i),
                dst,
            });
        }
        for (j, link) in self.out_links.iter().enumerate() {
            if let FSrc::Node(n, p) = *link {
                wires.push(Wire {
                    src: WireSrc::NodeOut(n, p),
                    dst: WireDst::Output(j),
                });
            }
        }
        Diagram::new(self.nodes, wires, self.in_labels, self.out_labels)
            .expect("fragments compose into well-formed diagrams")
    }
}

fn word_labels(word: &ObjectWord) -> Vec<WireLabel> {
    word.atoms().iter().map(|a| WireLabel::atom(a.name())).collect()
}

fn build_frag(term: &MorphismTerm, theory: &Theory) -> Frag {
    match term {
        MorphismTerm::Gen(name) => {
            let g = theory.generator(name).expect("typechecked term");
            Frag::node(DiagramNode {
                label: g.name.clone(),
                kind: NodeKind::Box,
                in_labels: word_labels(&g.dom),
                out_labels: word_labels(&g.cod),
            })
        }
        MorphismTerm::Id(w) => Frag::id(word_labels(w)),
        MorphismTerm::Sym(l, r) => Frag::sym(word_labels(l), word_labels(r)),
        MorphismTerm::Seq(a, b) => build_frag(a, theory).seq(build_frag(b, theory)),
        MorphismTerm::Par(l, r) => build_frag(l, theory).par(build_frag(r, theory)),
    }
}

/// Converts a term to its string diagram. Identities and braidings introduce
/// no nodes; the node multiset equals the term's generator occurrences, in
/// traversal order.
pub fn to_diagram(term: &MorphismTerm, theory: &Theory) -> Result<Diagram, TypeError> {
    typecheck(term, theory)?;
    Ok(build_frag(term, theory).into_diagram())
}

// ---------------------------------------------------------------------------
// Canonical term extraction
// ---------------------------------------------------------------------------

/// Turns sequence `dest` into ascending order by adjacent swaps, returning
/// the swap positions in application order. Bubble sort uses exactly one swap
/// per inversion, so the sequence is minimal.
pub(crate) fn bubble_swaps(dest: &mut [usize]) -> Vec<usize> {
    let mut swaps = Vec::new();
    let n = dest.len();
    if n < 2 {
        return swaps;
    }
    loop {
        let mut done = true;
        for k in 0..n - 1 {
            if dest[k] > dest[k + 1] {
                dest.swap(k, k + 1);
                swaps.push(k);
                done = false;
            }
        }
        if done {
            return swaps;
        }
    }
}

fn atom_of(label: &WireLabel) -> Atom {
    Atom::new(&label.text).expect("base diagram labels are atom names")
}

/// Extracts a term from a base diagram in layered form: alternating braiding
/// layers and box layers, top to bottom, boxes left of passthrough wires.
/// Extraction is deterministic and stable: re-extracting the diagram of an
/// extracted term reproduces it syntactically.
pub fn extract_term(d: &Diagram) -> MorphismTerm {
    let input_word: ObjectWord = d.inputs.iter().map(atom_of).collect();
    let mut acc = MorphismTerm::Id(input_word);

    let layer = d.layers();
    let mut by_layer: Vec<Vec<usize>> = Vec::new();
    for n in 0..d.nodes.len() {
        let l = layer[n];
        if by_layer.len() <= l {
            by_layer.resize(l + 1, Vec::new());
        }
        by_layer[l].push(n);
    }
    for row in &mut by_layer {
        row.sort_unstable();
    }

    // Live interface: wire ids with their labels, left to right.
    let mut live: Vec<(usize, Atom)> = (0..d.inputs.len())
        .map(|i| (d.input_wire[i], atom_of(&d.inputs[i])))
        .collect();

    let route = |live: &mut Vec<(usize, Atom)>, dest: Vec<usize>, acc: &mut MorphismTerm| {
        let mut dest = dest;
        let swaps = bubble_swaps(&mut dest);
        // Replay the same swaps on the live interface, emitting sym layers.
        for k in swaps {
            let left = live[k].1.clone();
            let right = live[k + 1].1.clone();
            let prefix: ObjectWord = live[..k].iter().map(|(_, a)| a.clone()).collect();
            let suffix: ObjectWord = live[k + 2..].iter().map(|(_, a)| a.clone()).collect();
            let swap_layer = MorphismTerm::smart_par(
                MorphismTerm::smart_par(
                    MorphismTerm::Id(prefix),
                    MorphismTerm::Sym(ObjectWord::single(left), ObjectWord::single(right)),
                ),
                MorphismTerm::Id(suffix),
            );
            live.swap(k, k + 1);
            *acc = MorphismTerm::smart_seq(std::mem::replace(acc, MorphismTerm::Id(ObjectWord::unit())), swap_layer);
        }
    };

    for row in &by_layer {
        // Target arrangement: consumed wires first, node-major in port order,
        // then passthroughs in their current relative order.
        let mut slot_of_wire: HashMap<usize, usize> = HashMap::new();
        let mut next = 0usize;
        for &n in row {
            for p in 0..d.nodes[n].in_labels.len() {
                slot_of_wire.insert(d.node_in_wire[n][p], next);
                next += 1;
            }
        }
        let consumed = next;
        let mut dest = Vec::with_capacity(live.len());
        let mut pass = 0usize;
        for (w, _) in &live {
            match slot_of_wire.get(w) {
                Some(&s) => dest.push(s),
                None => {
                    dest.push(consumed + pass);
                    pass += 1;
                }
            }
        }
        route(&mut live, dest, &mut acc);

        // Box layer: the row's generators, then the passthrough identity.
        let mut factors: Vec<MorphismTerm> = Vec::new();
        for &n in row {
            factors.push(MorphismTerm::Gen(d.nodes[n].label.clone()));
        }
        let pass_word: ObjectWord = live[consumed..].iter().map(|(_, a)| a.clone()).collect();
        let boxes = factors
            .into_iter()
            .fold(None::<MorphismTerm>, |acc, t| {
                Some(match acc {
                    None => t,
                    Some(a) => MorphismTerm::smart_par(a, t),
                })
            })
            .expect("layers are nonempty");
        let layer_term = MorphismTerm::smart_par(boxes, MorphismTerm::Id(pass_word));
        acc = MorphismTerm::smart_seq(acc, layer_term);

        // New interface: node outputs, then passthroughs.
        let mut new_live: Vec<(usize, Atom)> = Vec::new();
        for &n in row {
            for p in 0..d.nodes[n].out_labels.len() {
                new_live.push((d.node_out_wire[n][p], atom_of(&d.nodes[n].out_labels[p])));
            }
        }
        new_live.extend_from_slice(&live[consumed..]);
        live = new_live;
    }

    // Route the final interface onto the output boundary.
    let mut out_slot: HashMap<usize, usize> = HashMap::new();
    for j in 0..d.outputs.len() {
        out_slot.insert(d.output_wire[j], j);
    }
    let dest: Vec<usize> = live.iter().map(|(w, _)| out_slot[w]).collect();
    route(&mut live, dest, &mut acc);
    acc
}
