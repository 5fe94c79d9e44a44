//! Layered layout and image export for string diagrams.
//!
//! Diagrams are read top to bottom: the input boundary is the top row, each
//! node sits on the row given by its longest path from the top, and the
//! output boundary closes the picture. Within a row, an initial order by node
//! index is improved by a few barycenter sweeps to reduce crossings. All
//! arithmetic is a pure function of the diagram, so identical diagrams render
//! to byte-identical output.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::diagram::{Diagram, NodeKind, WireDst, WireSrc};

const X_GAP: f64 = 36.0;
const ROW_GAP: f64 = 64.0;
const MARGIN: f64 = 30.0;
const MIN_CANVAS: (f64, f64) = (120.0, 80.0);
const NEUTRAL_WIRE: &str = "#555555";

/// Rendering knobs baked into a layout.
#[derive(Debug, Clone, Default)]
pub struct LayoutOptions {
    /// Label regrouping junctions and transfer bars as well as boxes.
    pub show_structural_labels: bool,
}

/// A placed node.
#[derive(Debug, Clone)]
pub struct NodeBox {
    pub node: usize,
    pub label: String,
    pub kind: NodeKind,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    /// Colour of the node's outgoing side, for transfer bars.
    pub out_colour: String,
    pub in_colour: String,
}

/// A routed wire: a polyline through the rows it crosses, plus the wire's
/// endpoints for exporters that need connectivity rather than geometry.
#[derive(Debug, Clone)]
pub struct WireRoute {
    pub wire: usize,
    pub src: WireSrc,
    pub dst: WireDst,
    pub points: Vec<(f64, f64)>,
    pub colour: String,
    pub label: String,
}

/// A fully placed diagram ready for export.
#[derive(Debug, Clone)]
pub struct Layout {
    pub width: f64,
    pub height: f64,
    pub boxes: Vec<NodeBox>,
    pub routes: Vec<WireRoute>,
    pub show_structural_labels: bool,
}

/// Lays a diagram out with the default options.
pub fn layout(diagram: &Diagram, colours: Option<&HashMap<String, String>>) -> Layout {
    layout_with(diagram, colours, &LayoutOptions::default())
}

/// Lays a diagram out. `colours` maps colour keys (owner names) to display
/// colours; wires without a key, or with a key missing from the map, draw in
/// a neutral colour.
pub fn layout_with(
    diagram: &Diagram,
    colours: Option<&HashMap<String, String>>,
    options: &LayoutOptions,
) -> Layout {
    let resolve = |key: &Option<String>| -> String {
        key.as_deref()
            .and_then(|k| colours.and_then(|m| m.get(k).cloned()))
            .unwrap_or_else(|| NEUTRAL_WIRE.to_string())
    };

    let layers = diagram.layers();
    let row_count = layers.iter().copied().max().map_or(0, |m| m + 1);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); row_count];
    for (n, &l) in layers.iter().enumerate() {
        rows[l].push(n);
    }

    // Row y coordinates: inputs, node rows, outputs.
    let y_of_row = |row: usize| MARGIN + (row as f64 + 1.0) * ROW_GAP;
    let input_y = MARGIN;
    let output_y = MARGIN + (row_count as f64 + 1.0) * ROW_GAP;

    let mut input_x: Vec<f64> = (0..diagram.inputs().len())
        .map(|i| MARGIN + i as f64 * X_GAP)
        .collect();
    // Center narrow boundaries under wide diagrams later; first place nodes.

    let label_width = |label: &str| 18.0_f64.max(9.0 * label.len() as f64 + 10.0);
    let node_label = |n: usize| -> String {
        let node = &diagram.nodes()[n];
        match node.kind {
            NodeKind::Box => node.label.clone(),
            _ if options.show_structural_labels => node.label.clone(),
            _ => String::new(),
        }
    };
    let node_width = |n: usize| -> f64 {
        let node = &diagram.nodes()[n];
        match node.kind {
            NodeKind::Box => label_width(&node.label),
            NodeKind::Merge | NodeKind::Fork => 26.0,
            NodeKind::Transfer => 30.0,
        }
    };

    // Initial x per node: barycenter of already-placed sources, swept twice.
    let mut x_of: Vec<f64> = vec![0.0; diagram.node_count()];
    for row in &rows {
        for (slot, &n) in row.iter().enumerate() {
            x_of[n] = MARGIN + slot as f64 * (X_GAP * 2.0);
        }
    }
    for _ in 0..3 {
        for row in &rows {
            let mut keyed: Vec<(f64, usize)> = row
                .iter()
                .map(|&n| {
                    let node = &diagram.nodes()[n];
                    let mut acc = 0.0;
                    let mut count = 0.0;
                    for p in 0..node.in_labels.len() {
                        let w = diagram.wire_into_node(n, p);
                        match diagram.wires()[w].src {
                            WireSrc::Input(i) => {
                                acc += input_x[i];
                                count += 1.0;
                            }
                            WireSrc::NodeOut(m, _) => {
                                acc += x_of[m];
                                count += 1.0;
                            }
                        }
                    }
                    let bary = if count > 0.0 { acc / count } else { x_of[n] };
                    (bary, n)
                })
                .collect();
            keyed.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
            let mut cursor = MARGIN;
            for (bary, n) in keyed {
                let w = node_width(n);
                let x = bary.max(cursor);
                x_of[n] = x;
                cursor = x + w + X_GAP;
            }
        }
    }
    // Spread boundary rows to sit under/over their connections.
    for (i, x) in input_x.iter_mut().enumerate() {
        let w = diagram.wire_at_input(i);
        if let WireDst::NodeIn(n, p) = w.dst {
            let node = &diagram.nodes()[n];
            let ports = node.in_labels.len() as f64;
            *x = x_of[n] + node_width(n) * ((p as f64 + 1.0) / (ports + 1.0));
        }
        // keep the default slot for boundary-to-boundary wires
    }
    let mut taken = MARGIN - X_GAP;
    for x in input_x.iter_mut() {
        if *x <= taken + 4.0 {
            *x = taken + X_GAP;
        }
        taken = *x;
    }
    let mut output_x: Vec<f64> = (0..diagram.outputs().len())
        .map(|j| MARGIN + j as f64 * X_GAP)
        .collect();
    for (j, x) in output_x.iter_mut().enumerate() {
        let w = diagram.wire_at_output(j);
        match w.src {
            WireSrc::NodeOut(n, p) => {
                let node = &diagram.nodes()[n];
                let ports = node.out_labels.len() as f64;
                *x = x_of[n] + node_width(n) * ((p as f64 + 1.0) / (ports + 1.0));
            }
            WireSrc::Input(i) => *x = input_x[i],
        }
    }
    let mut taken = MARGIN - X_GAP;
    for x in output_x.iter_mut() {
        if *x <= taken + 4.0 {
            *x = taken + X_GAP;
        }
        taken = *x;
    }

    let boxes: Vec<NodeBox> = (0..diagram.node_count())
        .map(|n| {
            let node = &diagram.nodes()[n];
            let in_colour = node
                .in_labels
                .first()
                .map(|l| resolve(&l.colour))
                .unwrap_or_else(|| NEUTRAL_WIRE.to_string());
            let out_colour = node
                .out_labels
                .first()
                .map(|l| resolve(&l.colour))
                .unwrap_or_else(|| NEUTRAL_WIRE.to_string());
            NodeBox {
                node: n,
                label: node_label(n),
                kind: node.kind,
                x: x_of[n],
                y: y_of_row(layers[n]),
                width: node_width(n),
                height: 26.0,
                out_colour,
                in_colour,
            }
        })
        .collect();

    let port_x = |b: &NodeBox, p: usize, ports: usize| -> f64 {
        b.x + b.width * ((p as f64 + 1.0) / (ports as f64 + 1.0))
    };
    let routes: Vec<WireRoute> = diagram
        .wires()
        .iter()
        .enumerate()
        .map(|(w, wire)| {
            let (x1, y1, colour, label) = match wire.src {
                WireSrc::Input(i) => {
                    let l = &diagram.inputs()[i];
                    (input_x[i], input_y, resolve(&l.colour), l.text.clone())
                }
                WireSrc::NodeOut(n, p) => {
                    let b = &boxes[n];
                    let node = &diagram.nodes()[n];
                    let l = &node.out_labels[p];
                    (
                        port_x(b, p, node.out_labels.len()),
                        b.y + b.height,
                        resolve(&l.colour),
                        l.text.clone(),
                    )
                }
            };
            let (x2, y2) = match wire.dst {
                WireDst::Output(j) => (output_x[j], output_y),
                WireDst::NodeIn(n, q) => {
                    let b = &boxes[n];
                    (port_x(b, q, diagram.nodes()[n].in_labels.len()), b.y)
                }
            };
            let points = if (x1 - x2).abs() < 0.01 {
                vec![(x1, y1), (x2, y2)]
            } else {
                let ym = (y1 + y2) / 2.0;
                vec![(x1, y1), (x1, ym - 8.0), (x2, ym + 8.0), (x2, y2)]
            };
            WireRoute {
                wire: w,
                src: wire.src,
                dst: wire.dst,
                points,
                colour,
                label,
            }
        })
        .collect();

    let mut width: f64 = MIN_CANVAS.0;
    let mut height: f64 = MIN_CANVAS.1;
    for b in &boxes {
        width = width.max(b.x + b.width + MARGIN);
        height = height.max(b.y + b.height + MARGIN);
    }
    for r in &routes {
        for &(x, y) in &r.points {
            width = width.max(x + MARGIN);
            height = height.max(y + MARGIN);
        }
    }

    Layout {
        width,
        height,
        boxes,
        routes,
        show_structural_labels: options.show_structural_labels,
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.1}")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Emits a standalone SVG image. Output is byte-identical for identical
/// layouts: floats are formatted at fixed precision and iteration order is
/// the diagram's own.
pub fn render_svg(layout: &Layout) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
        fmt_f(layout.width),
        fmt_f(layout.height),
        fmt_f(layout.width),
        fmt_f(layout.height)
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fmt_f(layout.width),
        fmt_f(layout.height)
    );
    for route in &layout.routes {
        let pts: Vec<String> = route
            .points
            .iter()
            .map(|(x, y)| format!("{},{}", fmt_f(*x), fmt_f(*y)))
            .collect();
        let _ = writeln!(
            s,
            "<polyline class=\"wire\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>",
            xml_escape(&route.colour),
            pts.join(" ")
        );
    }
    for b in &layout.boxes {
        let _ = writeln!(s, "<g class=\"node\">");
        match b.kind {
            NodeKind::Box => {
                let _ = writeln!(
                    s,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" rx=\"4\" fill=\"#f7f3e9\" stroke=\"#333333\"/>",
                    fmt_f(b.x),
                    fmt_f(b.y),
                    fmt_f(b.width),
                    fmt_f(b.height)
                );
            }
            NodeKind::Merge => {
                // Triangle narrowing downward: many collections become one.
                let _ = writeln!(
                    s,
                    "<path class=\"junction\" d=\"M {} {} L {} {} L {} {} Z\" fill=\"{}\" stroke=\"#333333\"/>",
                    fmt_f(b.x),
                    fmt_f(b.y),
                    fmt_f(b.x + b.width),
                    fmt_f(b.y),
                    fmt_f(b.x + b.width / 2.0),
                    fmt_f(b.y + b.height),
                    xml_escape(&b.out_colour)
                );
            }
            NodeKind::Fork => {
                let _ = writeln!(
                    s,
                    "<path class=\"junction\" d=\"M {} {} L {} {} L {} {} Z\" fill=\"{}\" stroke=\"#333333\"/>",
                    fmt_f(b.x + b.width / 2.0),
                    fmt_f(b.y),
                    fmt_f(b.x + b.width),
                    fmt_f(b.y + b.height),
                    fmt_f(b.x),
                    fmt_f(b.y + b.height),
                    xml_escape(&b.in_colour)
                );
            }
            NodeKind::Transfer => {
                // A bar whose halves carry the old and new owner colours.
                let _ = writeln!(
                    s,
                    "<rect class=\"transfer\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                    fmt_f(b.x),
                    fmt_f(b.y + b.height / 2.0 - 7.0),
                    fmt_f(b.width),
                    fmt_f(7.0),
                    xml_escape(&b.in_colour)
                );
                let _ = writeln!(
                    s,
                    "<rect class=\"transfer\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                    fmt_f(b.x),
                    fmt_f(b.y + b.height / 2.0),
                    fmt_f(b.width),
                    fmt_f(7.0),
                    xml_escape(&b.out_colour)
                );
            }
        }
        if !b.label.is_empty() {
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
                fmt_f(b.x + b.width / 2.0),
                fmt_f(b.y + b.height / 2.0 + 4.0),
                xml_escape(&b.label)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Emits a DOT graph for external tooling: boxes become nodes, boundary
/// positions become points, and wires become edges coloured like their
/// routes.
pub fn render_dot(layout: &Layout) -> String {
    let dot_escape = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let mut s = String::new();
    s.push_str("digraph diagram {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n");
    for b in &layout.boxes {
        let shape = match b.kind {
            NodeKind::Box => "box",
            NodeKind::Merge => "invtriangle",
            NodeKind::Fork => "triangle",
            NodeKind::Transfer => "rect",
        };
        let _ = writeln!(
            s,
            "  n{} [shape={}, label=\"{}\"];",
            b.node,
            shape,
            dot_escape(&b.label)
        );
    }
    for route in &layout.routes {
        if let WireSrc::Input(i) = route.src {
            let _ = writeln!(s, "  in{i} [shape=point, label=\"\"];");
        }
        if let WireDst::Output(j) = route.dst {
            let _ = writeln!(s, "  out{j} [shape=point, label=\"\"];");
        }
    }
    for route in &layout.routes {
        let from = match route.src {
            WireSrc::Input(i) => format!("in{i}"),
            WireSrc::NodeOut(n, _) => format!("n{n}"),
        };
        let to = match route.dst {
            WireDst::Output(j) => format!("out{j}"),
            WireDst::NodeIn(n, _) => format!("n{n}"),
        };
        let _ = writeln!(
            s,
            "  {from} -> {to} [color=\"{}\", label=\"{}\"];",
            dot_escape(&route.colour),
            dot_escape(&route.label)
        );
    }
    s.push_str("}\n");
    s
}
