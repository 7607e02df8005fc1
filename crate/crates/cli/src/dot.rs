//! Graphviz output. Nodes are chambers, edges join chambers sharing a
//! panel and are labelled with the panel type.

use std::collections::BTreeSet;
use std::fmt::Write;

use chambers::apartments::RealizationCertificate;
use chambers::building::{Apartment, Building, Chamber};

const HOST: &str = "#1f77b4";
const WITNESS: &str = "#d62728";
const BOTH: &str = "#9467bd";
const TARGET: &str = "#2ca02c";

fn graph(
    b: &Building,
    nodes: &BTreeSet<Chamber>,
    colour: impl Fn(Chamber) -> Option<&'static str>,
) -> String {
    let mut out =
        String::from("graph chambers {\n  node [shape=circle, style=filled, fillcolor=white];\n");
    for &c in nodes {
        match colour(c) {
            Some(col) => writeln!(out, "  c{c} [label=\"{c}\", fillcolor=\"{col}\"];").unwrap(),
            None => writeln!(out, "  c{c} [label=\"{c}\"];").unwrap(),
        }
    }
    for &c in nodes {
        for s in 0..b.rank() {
            for &d in b.panel(s, c) {
                if d > c && nodes.contains(&d) {
                    writeln!(out, "  c{c} -- c{d} [label=\"s{s}\"];").unwrap();
                }
            }
        }
    }
    out
}

pub fn building(b: &Building) -> String {
    let mut out = graph(b, &b.chambers().collect(), |_| None);
    out.push_str("}\n");
    out
}

pub fn apartment(b: &Building, ap: &Apartment) -> String {
    let mut out = graph(b, &ap.chambers().iter().copied().collect(), |_| Some(HOST));
    out.push_str("}\n");
    out
}

/// Host and witness chambers; target simplices that are not chambers
/// appear as boxes joined to the host chambers containing them.
pub fn certificate(b: &Building, cert: &RealizationCertificate) -> String {
    let nodes: BTreeSet<Chamber> = cert
        .host
        .chambers()
        .iter()
        .chain(cert.witness.chambers())
        .copied()
        .collect();
    let target: BTreeSet<Chamber> = cert.target.chambers().into_iter().collect();
    let mut out = graph(b, &nodes, |c| {
        if target.contains(&c) {
            Some(TARGET)
        } else {
            match (cert.host.contains(c), cert.witness.contains(c)) {
                (true, true) => Some(BOTH),
                (true, false) => Some(HOST),
                (false, true) => Some(WITNESS),
                (false, false) => None,
            }
        }
    });
    for a in cert.target.iter().filter(|a| !a.is_chamber()) {
        let id = format!("k{}_{}", a.cotype, a.least);
        writeln!(
            out,
            "  {id} [shape=box, label=\"cotype {} at {}\", fillcolor=\"{TARGET}\"];",
            a.cotype, a.least
        )
        .unwrap();
        for &c in cert.host.chambers().iter().filter(|&&c| b.contains(a, c)) {
            writeln!(out, "  {id} -- c{c} [style=dashed];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
