//! Equality of terms modulo a theory's user equations.
//!
//! Structural equality in the free category is [`diagram_equal`]; user
//! equations extend it to a bounded bidirectional search. Each equation is a
//! rewrite rule applicable in both directions at any location of a diagram: a
//! match is a convex, label-preserving embedding of the rule side's diagram,
//! and applying it splices the other side into the cut. Reachability is
//! explored breadth-first from both endpoints at once, with states deduplicated
//! up to diagram isomorphism. Equational theories over a symmetric monoidal
//! signature are undecidable in general, so the search carries an explicit
//! step budget and reports [`EqResult::Unknown`] when it runs out;
//! `NotEqual` is only reported when an equivalence class has been exhausted.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::diagram::{diagram_equal, to_diagram, Diagram, DiagramNode, Wire, WireDst, WireSrc};
use crate::error::TypeError;
use crate::term::{expect_parallel, MorphismTerm};
use crate::theory::Theory;

/// Verdict of an equality query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqResult {
    Equal,
    NotEqual,
    /// The search budget was exhausted before the question was settled.
    Unknown,
}

/// Decides whether two parallel terms are equal modulo the theory's
/// equations, within `budget` state expansions.
pub fn equal_modulo(
    t1: &MorphismTerm,
    t2: &MorphismTerm,
    theory: &Theory,
    budget: usize,
) -> Result<EqResult, TypeError> {
    expect_parallel(t1, t2, theory)?;
    let d1 = to_diagram(t1, theory)?;
    let d2 = to_diagram(t2, theory)?;
    Ok(equal_modulo_diagrams(&d1, &d2, theory, budget))
}

/// Diagram-level entry point for the same search.
pub fn equal_modulo_diagrams(
    d1: &Diagram,
    d2: &Diagram,
    theory: &Theory,
    budget: usize,
) -> EqResult {
    if diagram_equal(d1, d2) {
        return EqResult::Equal;
    }
    if theory.equations().is_empty() {
        return EqResult::NotEqual;
    }

    // Each equation yields both orientations.
    let mut rules: Vec<(Diagram, Diagram)> = Vec::new();
    for eq in theory.equations() {
        let l = to_diagram(&eq.lhs, theory).expect("theory equations are well-typed");
        let r = to_diagram(&eq.rhs, theory).expect("theory equations are well-typed");
        rules.push((l.clone(), r.clone()));
        rules.push((r, l));
    }

    let mut sides = [Visited::new(d1.clone()), Visited::new(d2.clone())];
    let mut expansions = 0usize;
    loop {
        // A side with an exhausted frontier has fully enumerated its
        // equivalence class, which provably misses the other endpoint.
        if sides[0].frontier.is_empty() || sides[1].frontier.is_empty() {
            return EqResult::NotEqual;
        }
        if expansions >= budget {
            return EqResult::Unknown;
        }
        // Strict alternation keeps a cheaply-closing side from starving.
        let active = expansions % 2;
        expansions += 1;
        let idx = sides[active].frontier.pop_front().expect("nonempty frontier");
        let state = sides[active].states[idx].clone();
        for next in neighbours(&state, &rules) {
            if sides[active].contains(&next) {
                continue;
            }
            if sides[1 - active].contains(&next) {
                return EqResult::Equal;
            }
            sides[active].push(next);
        }
    }
}

struct Visited {
    states: Vec<Diagram>,
    by_key: HashMap<u64, Vec<usize>>,
    frontier: VecDeque<usize>,
}

impl Visited {
    fn new(root: Diagram) -> Self {
        let mut v = Visited {
            states: Vec::new(),
            by_key: HashMap::new(),
            frontier: VecDeque::new(),
        };
        v.push(root);
        v
    }

    fn contains(&self, d: &Diagram) -> bool {
        self.by_key
            .get(&d.iso_key())
            .is_some_and(|bucket| bucket.iter().any(|&i| diagram_equal(&self.states[i], d)))
    }

    fn push(&mut self, d: Diagram) {
        let key = d.iso_key();
        let idx = self.states.len();
        self.states.push(d);
        self.by_key.entry(key).or_default().push(idx);
        self.frontier.push_back(idx);
    }
}

/// All diagrams reachable from `d` by one rule application, deduplicated up
/// to isomorphism.
fn neighbours(d: &Diagram, rules: &[(Diagram, Diagram)]) -> Vec<Diagram> {
    let mut out: Vec<Diagram> = Vec::new();
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    for (lhs, rhs) in rules {
        for m in find_matches(d, lhs) {
            if let Some(next) = apply_match(d, lhs, rhs, &m) {
                let key = next.iso_key();
                let bucket = seen.entry(key).or_default();
                if bucket.iter().any(|&i| diagram_equal(&out[i], &next)) {
                    continue;
                }
                bucket.push(out.len());
                out.push(next);
            }
        }
    }
    out
}

/// A convex occurrence of a rule side inside a host diagram: where each
/// pattern node lands, and the host-side stitch points for the pattern's
/// boundary wires.
struct Match {
    node_map: Vec<usize>,
    in_cut: Vec<WireSrc>,
    out_cut: Vec<WireDst>,
}

fn find_matches(host: &Diagram, pat: &Diagram) -> Vec<Match> {
    let mut out = Vec::new();
    let mut node_map = vec![usize::MAX; pat.node_count()];
    let mut taken = vec![false; host.node_count()];
    assign_nodes(host, pat, 0, &mut node_map, &mut taken, &mut out);
    out
}

fn nodes_compatible(a: &DiagramNode, b: &DiagramNode) -> bool {
    a.label == b.label && a.kind == b.kind && a.in_labels == b.in_labels && a.out_labels == b.out_labels
}

fn assign_nodes(
    host: &Diagram,
    pat: &Diagram,
    depth: usize,
    node_map: &mut Vec<usize>,
    taken: &mut Vec<bool>,
    out: &mut Vec<Match>,
) {
    if depth == pat.node_count() {
        complete_match(host, pat, node_map, out);
        return;
    }
    for h in 0..host.node_count() {
        if taken[h] || !nodes_compatible(&pat.nodes()[depth], &host.nodes()[h]) {
            continue;
        }
        node_map[depth] = h;
        taken[h] = true;
        assign_nodes(host, pat, depth + 1, node_map, taken, out);
        taken[h] = false;
        node_map[depth] = usize::MAX;
    }
}

/// Verifies wires for a candidate node assignment and enumerates passthrough
/// wire choices, emitting every valid match.
fn complete_match(host: &Diagram, pat: &Diagram, node_map: &[usize], out: &mut Vec<Match>) {
    let mut used: HashSet<usize> = HashSet::new();
    let mut in_cut: Vec<Option<WireSrc>> = vec![None; pat.inputs().len()];
    let mut out_cut: Vec<Option<WireDst>> = vec![None; pat.outputs().len()];
    let mut passthrough: Vec<(usize, usize)> = Vec::new(); // (pattern input, pattern output)

    for wire in pat.wires() {
        match (wire.src, wire.dst) {
            (WireSrc::NodeOut(a, p), WireDst::NodeIn(b, q)) => {
                let w = host.wire_out_of_node(node_map[a], p);
                if host.wires()[w].dst != WireDst::NodeIn(node_map[b], q) || !used.insert(w) {
                    return;
                }
            }
            (WireSrc::Input(i), WireDst::NodeIn(b, q)) => {
                let w = host.wire_into_node(node_map[b], q);
                if !used.insert(w) {
                    return;
                }
                in_cut[i] = Some(host.wires()[w].src);
            }
            (WireSrc::NodeOut(a, p), WireDst::Output(j)) => {
                let w = host.wire_out_of_node(node_map[a], p);
                if !used.insert(w) {
                    return;
                }
                out_cut[j] = Some(host.wires()[w].dst);
            }
            (WireSrc::Input(i), WireDst::Output(j)) => passthrough.push((i, j)),
        }
    }

    // Convexity: no host path may leave the matched region and re-enter it.
    let matched: HashSet<usize> = node_map.iter().copied().collect();
    let desc = reach(host, &matched, true);
    let anc = reach(host, &matched, false);
    if desc.intersection(&anc).any(|n| !matched.contains(n)) {
        return;
    }

    choose_passthroughs(
        host, pat, node_map, &matched, &desc, &anc, &passthrough, 0, &mut used, &mut in_cut,
        &mut out_cut, out,
    );
}

/// Nodes reachable from the region (forward) or reaching it (backward),
/// excluding region members themselves unless re-entered.
fn reach(host: &Diagram, region: &HashSet<usize>, forward: bool) -> HashSet<usize> {
    let mut seen: HashSet<usize> = HashSet::new();
    let mut queue: Vec<usize> = Vec::new();
    let push_adjacent = |n: usize, seen: &mut HashSet<usize>, queue: &mut Vec<usize>| {
        let host_node = &host.nodes()[n];
        if forward {
            for p in 0..host_node.out_labels.len() {
                if let WireDst::NodeIn(m, _) = host.wires()[host.wire_out_of_node(n, p)].dst {
                    if seen.insert(m) {
                        queue.push(m);
                    }
                }
            }
        } else {
            for p in 0..host_node.in_labels.len() {
                if let WireSrc::NodeOut(m, _) = host.wires()[host.wire_into_node(n, p)].src {
                    if seen.insert(m) {
                        queue.push(m);
                    }
                }
            }
        }
    };
    for &n in region {
        push_adjacent(n, &mut seen, &mut queue);
    }
    while let Some(n) = queue.pop() {
        push_adjacent(n, &mut seen, &mut queue);
    }
    seen
}

#[allow(clippy::too_many_arguments)]
fn choose_passthroughs(
    host: &Diagram,
    pat: &Diagram,
    node_map: &[usize],
    matched: &HashSet<usize>,
    desc: &HashSet<usize>,
    anc: &HashSet<usize>,
    passthrough: &[(usize, usize)],
    depth: usize,
    used: &mut HashSet<usize>,
    in_cut: &mut Vec<Option<WireSrc>>,
    out_cut: &mut Vec<Option<WireDst>>,
    out: &mut Vec<Match>,
) {
    if depth == passthrough.len() {
        out.push(Match {
            node_map: node_map.to_vec(),
            in_cut: in_cut.iter().map(|c| c.expect("all inputs cut")).collect(),
            out_cut: out_cut.iter().map(|c| c.expect("all outputs cut")).collect(),
        });
        return;
    }
    let (pi, pj) = passthrough[depth];
    let label = &pat.inputs()[pi];
    for (w, wire) in host.wires().iter().enumerate() {
        if used.contains(&w) {
            continue;
        }
        // The cut wire must run from strictly before the region to strictly
        // after it, so a slice through the region can also cut it.
        let src_ok = match wire.src {
            WireSrc::Input(i) => &host.inputs()[i] == label,
            WireSrc::NodeOut(n, p) => {
                !matched.contains(&n) && !desc.contains(&n) && &host.nodes()[n].out_labels[p] == label
            }
        };
        let dst_ok = match wire.dst {
            WireDst::Output(j) => &host.outputs()[j] == label,
            WireDst::NodeIn(n, q) => {
                !matched.contains(&n) && !anc.contains(&n) && &host.nodes()[n].in_labels[q] == label
            }
        };
        if !src_ok || !dst_ok {
            continue;
        }
        used.insert(w);
        in_cut[pi] = Some(wire.src);
        out_cut[pj] = Some(wire.dst);
        choose_passthroughs(
            host, pat, node_map, matched, desc, anc, passthrough, depth + 1, used, in_cut,
            out_cut, out,
        );
        used.remove(&w);
        in_cut[pi] = None;
        out_cut[pj] = None;
    }
}

/// Splices `rhs` into `host` at the matched occurrence of `lhs`.
fn apply_match(host: &Diagram, lhs: &Diagram, rhs: &Diagram, m: &Match) -> Option<Diagram> {
    let matched: HashSet<usize> = m.node_map.iter().copied().collect();
    let mut new_index = vec![usize::MAX; host.node_count()];
    let mut nodes: Vec<DiagramNode> = Vec::new();
    for (n, node) in host.nodes().iter().enumerate() {
        if !matched.contains(&n) {
            new_index[n] = nodes.len();
            nodes.push(node.clone());
        }
    }
    let rhs_base = nodes.len();
    nodes.extend(rhs.nodes().iter().cloned());

    let fix_src = |s: WireSrc| match s {
        WireSrc::Input(i) => WireSrc::Input(i),
        WireSrc::NodeOut(n, p) => WireSrc::NodeOut(new_index[n], p),
    };
    let fix_dst = |d: WireDst| match d {
        WireDst::Output(j) => WireDst::Output(j),
        WireDst::NodeIn(n, q) => WireDst::NodeIn(new_index[n], q),
    };

    // Host wires that were consumed by the match: the images of the pattern's
    // wires. All other wires survive unchanged.
    let mut used: HashSet<usize> = HashSet::new();
    for wire in lhs.wires() {
        match (wire.src, wire.dst) {
            (WireSrc::NodeOut(a, p), _) => {
                used.insert(host.wire_out_of_node(m.node_map[a], p));
            }
            (WireSrc::Input(_), WireDst::NodeIn(b, q)) => {
                used.insert(host.wire_into_node(m.node_map[b], q));
            }
            (WireSrc::Input(i), WireDst::Output(_)) => {
                // Passthrough cut: a source endpoint carries exactly one
                // wire, so the stitch data pins the host wire down.
                let src = m.in_cut[i];
                let w = host
                    .wires()
                    .iter()
                    .position(|hw| hw.src == src)
                    .expect("cut wire exists");
                used.insert(w);
            }
        }
    }

    let mut wires: Vec<Wire> = Vec::new();
    for (w, wire) in host.wires().iter().enumerate() {
        if used.contains(&w) {
            continue;
        }
        wires.push(Wire {
            src: fix_src(wire.src),
            dst: fix_dst(wire.dst),
        });
    }
    for wire in rhs.wires() {
        let src = match wire.src {
            WireSrc::Input(i) => fix_src(m.in_cut[i]),
            WireSrc::NodeOut(a, p) => WireSrc::NodeOut(rhs_base + a, p),
        };
        let dst = match wire.dst {
            WireDst::Output(j) => fix_dst(m.out_cut[j]),
            WireDst::NodeIn(b, q) => WireDst::NodeIn(rhs_base + b, q),
        };
        wires.push(Wire { src, dst });
    }

    Diagram::new(nodes, wires, host.inputs().to_vec(), host.outputs().to_vec()).ok()
}
