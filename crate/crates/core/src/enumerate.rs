//! Brute-force enumeration of morphisms, one representative per isomorphism
//! class.
//!
//! Every diagram with the requested boundaries arises from a multiset of
//! generator nodes together with a label-preserving bijection from sources
//! (diagram inputs and node outputs) to sinks (diagram outputs and node
//! inputs) whose node adjacency is acyclic, so enumerating those and
//! deduplicating with [`diagram_equal`] is exhaustive within the node bound.
//! Intended as a desk-scale oracle for the equality engine, not a fast path.

use crate::diagram::{diagram_equal, Diagram, DiagramNode, NodeKind, Wire, WireDst, WireSrc, WireLabel};
use crate::error::EnumerateError;
use crate::theory::{ObjectWord, Theory};

/// Class-count cap for [`enumerate_morphisms`].
pub const DEFAULT_CLASS_CAP: usize = 10_000;

/// Enumerates all morphisms `dom -> cod` with at most `max_nodes` generator
/// nodes, up to diagram isomorphism, with the default class cap.
pub fn enumerate_morphisms(
    theory: &Theory,
    dom: &ObjectWord,
    cod: &ObjectWord,
    max_nodes: usize,
) -> Result<Vec<Diagram>, EnumerateError> {
    enumerate_morphisms_capped(theory, dom, cod, max_nodes, DEFAULT_CLASS_CAP)
}

/// As [`enumerate_morphisms`], failing once more than `cap` classes exist.
pub fn enumerate_morphisms_capped(
    theory: &Theory,
    dom: &ObjectWord,
    cod: &ObjectWord,
    max_nodes: usize,
    cap: usize,
) -> Result<Vec<Diagram>, EnumerateError> {
    let mut classes: Vec<Diagram> = Vec::new();
    let mut multiset: Vec<usize> = Vec::new();
    choose_multiset(theory, dom, cod, max_nodes, 0, &mut multiset, &mut classes, cap)?;
    Ok(classes)
}

#[allow(clippy::too_many_arguments)]
fn choose_multiset(
    theory: &Theory,
    dom: &ObjectWord,
    cod: &ObjectWord,
    budget: usize,
    from: usize,
    multiset: &mut Vec<usize>,
    classes: &mut Vec<Diagram>,
    cap: usize,
) -> Result<(), EnumerateError> {
    wire_multiset(theory, dom, cod, multiset, classes, cap)?;
    if budget == 0 {
        return Ok(());
    }
    for g in from..theory.generators().len() {
        multiset.push(g);
        choose_multiset(theory, dom, cod, budget - 1, g, multiset, classes, cap)?;
        multiset.pop();
    }
    Ok(())
}

fn wire_multiset(
    theory: &Theory,
    dom: &ObjectWord,
    cod: &ObjectWord,
    multiset: &[usize],
    classes: &mut Vec<Diagram>,
    cap: usize,
) -> Result<(), EnumerateError> {
    let gens = theory.generators();
    let nodes: Vec<DiagramNode> = multiset
        .iter()
        .map(|&g| DiagramNode {
            label: gens[g].name.clone(),
            kind: NodeKind::Box,
            in_labels: gens[g].dom.atoms().iter().map(|a| WireLabel::atom(a.name())).collect(),
            out_labels: gens[g].cod.atoms().iter().map(|a| WireLabel::atom(a.name())).collect(),
        })
        .collect();

    let mut sources: Vec<(WireSrc, WireLabel)> = dom
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| (WireSrc::Input(i), WireLabel::atom(a.name())))
        .collect();
    for (n, node) in nodes.iter().enumerate() {
        for (p, l) in node.out_labels.iter().enumerate() {
            sources.push((WireSrc::NodeOut(n, p), l.clone()));
        }
    }
    let mut sinks: Vec<(WireDst, WireLabel)> = cod
        .atoms()
        .iter()
        .enumerate()
        .map(|(j, a)| (WireDst::Output(j), WireLabel::atom(a.name())))
        .collect();
    for (n, node) in nodes.iter().enumerate() {
        for (q, l) in node.in_labels.iter().enumerate() {
            sinks.push((WireDst::NodeIn(n, q), l.clone()));
        }
    }
    if sources.len() != sinks.len() {
        return Ok(());
    }
    // Label counts must agree for a bijection to exist.
    {
        let mut a: Vec<&WireLabel> = sources.iter().map(|(_, l)| l).collect();
        let mut b: Vec<&WireLabel> = sinks.iter().map(|(_, l)| l).collect();
        a.sort_by(|x, y| x.text.cmp(&y.text));
        b.sort_by(|x, y| x.text.cmp(&y.text));
        if a != b {
            return Ok(());
        }
    }

    let inputs: Vec<WireLabel> = dom.atoms().iter().map(|a| WireLabel::atom(a.name())).collect();
    let outputs: Vec<WireLabel> = cod.atoms().iter().map(|a| WireLabel::atom(a.name())).collect();
    let mut assignment: Vec<Option<usize>> = vec![None; sources.len()];
    let mut sink_taken = vec![false; sinks.len()];
    wire_backtrack(
        &nodes, &sources, &sinks, &inputs, &outputs, 0, &mut assignment, &mut sink_taken,
        classes, cap,
    )
}

#[allow(clippy::too_many_arguments)]
fn wire_backtrack(
    nodes: &[DiagramNode],
    sources: &[(WireSrc, WireLabel)],
    sinks: &[(WireDst, WireLabel)],
    inputs: &[WireLabel],
    outputs: &[WireLabel],
    depth: usize,
    assignment: &mut Vec<Option<usize>>,
    sink_taken: &mut Vec<bool>,
    classes: &mut Vec<Diagram>,
    cap: usize,
) -> Result<(), EnumerateError> {
    if depth == sources.len() {
        let wires: Vec<Wire> = assignment
            .iter()
            .enumerate()
            .map(|(s, t)| Wire {
                src: sources[s].0,
                dst: sinks[t.expect("complete assignment")].0,
            })
            .collect();
        // Cyclic wirings are not diagrams; discard them here.
        if let Ok(d) = Diagram::new(nodes.to_vec(), wires, inputs.to_vec(), outputs.to_vec()) {
            if !classes.iter().any(|c| diagram_equal(c, &d)) {
                if classes.len() >= cap {
                    return Err(EnumerateError::ClassCapExceeded(cap));
                }
                classes.push(d);
            }
        }
        return Ok(());
    }
    for t in 0..sinks.len() {
        if sink_taken[t] || sinks[t].1 != sources[depth].1 {
            continue;
        }
        assignment[depth] = Some(t);
        sink_taken[t] = true;
        wire_backtrack(
            nodes, sources, sinks, inputs, outputs, depth + 1, assignment, sink_taken, classes,
            cap,
        )?;
        sink_taken[t] = false;
        assignment[depth] = None;
    }
    Ok(())
}
