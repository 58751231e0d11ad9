//! DOT export of the closure Hasse diagram below an orbit, with the
//! rational singular locus marked by filled nodes.

use std::io::Write;
use std::path::Path;

use nilrat_core::orbits::OrbitPoset;
use nilrat_core::ratsmooth::LocusData;
use nilrat_core::Error;

/// Writes the sub-Hasse diagram of all orbits below the report's orbit.
/// Node order and edge order are deterministic; edges point from a cover's
/// lower orbit to its upper orbit.
pub fn export_dot(locus: &LocusData, path: &Path) -> Result<(), Error> {
    let poset = OrbitPoset::build(locus.alg)?;
    let li = poset.index_of(&locus.lambda)?;
    let down = poset.down_set(li);
    let in_down = |i: usize| down.contains(&i);

    let mut out = String::new();
    out.push_str("digraph closure {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=box];\n");
    for &i in &down {
        let node = &poset.nodes()[i];
        let filled = locus.in_locus(node);
        out.push_str(&format!(
            "  \"{node}\" [label=\"{node}\\ndim {}\"{}];\n",
            poset.dim(i),
            if filled { ", style=filled" } else { "" }
        ));
    }
    for &(lo, hi) in poset.covers() {
        if in_down(lo) && in_down(hi) {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                poset.nodes()[lo],
                poset.nodes()[hi]
            ));
        }
    }
    out.push_str("}\n");

    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}
