//! Human-readable rendering of a [`Report`].

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::report::*;

pub fn render(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# mwss {} report\n", r.kind);
    let _ = writeln!(s, "- tool: {} {}", r.tool.name, r.tool.version);
    let _ = writeln!(s, "- input sha256: `{}`", r.input_sha256);
    let _ = writeln!(
        s,
        "- status: **{}**",
        if r.passed { "PASS" } else { "FAIL" }
    );
    let o = &r.options;
    for (name, v) in [
        ("seed", o.seed.map(|v| v.to_string())),
        ("e_max", o.e_max.map(|v| v.to_string())),
        ("precision", o.precision.map(|v| v.to_string())),
        ("budget", o.budget.map(|v| v.to_string())),
        ("time", r.timing_ms.map(|v| format!("{v} ms"))),
    ] {
        if let Some(v) = v {
            let _ = writeln!(s, "- {name}: {v}");
        }
    }
    s.push_str("\n## Checks\n\n| check | result | detail |\n|---|---|---|\n");
    for c in &r.checks {
        let _ = writeln!(
            s,
            "| {} | {} | {} |",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.detail.as_deref().unwrap_or("")
        );
    }
    if !r.warnings.is_empty() {
        s.push_str("\n## Warnings\n\n");
        for w in &r.warnings {
            let _ = writeln!(s, "- {w}");
        }
    }
    s.push('\n');
    match &r.result {
        Outcome::Mono(m) => mono(&mut s, m),
        Outcome::Rzss(m) => rzss(&mut s, m),
        Outcome::Lefscan(m) => lefscan(&mut s, m),
        Outcome::Critps(m) => critps(&mut s, m),
        Outcome::Koszul(m) => koszul(&mut s, m),
    }
    s
}

fn jump_table(s: &mut String, jumps: &[Jump]) {
    s.push_str("| a | dim fil_a | dim gr_a |\n|---|---|---|\n");
    for j in jumps {
        let _ = writeln!(s, "| {} | {} | {} |", j.a, j.fil, j.gr);
    }
}

fn mono(s: &mut String, m: &MonoResult) {
    let _ = writeln!(
        s,
        "dimension {}, nilpotency index {}, Jordan type {:?}\n",
        m.dim, m.nilpotency_index, m.jordan_type
    );
    s.push_str("## Monodromy filtration jumps\n\n");
    jump_table(s, &m.jumps);
    s.push_str("\n## Kernel/image bigrading\n\n| b | c | dim |\n|---|---|---|\n");
    for b in &m.bigraded {
        let _ = writeln!(s, "| {} | {} | {} |", b.b, b.c, b.dim);
    }
    if let Some(p) = &m.purity {
        let _ = writeln!(
            s,
            "\n## Purity at weight {}: {}\n",
            p.weight,
            if p.pure { "pure" } else { "not pure" }
        );
        s.push_str("| a | dim fil^M_a | dim fil^W_(a+w) | equal |\n|---|---|---|---|\n");
        for row in &p.rows {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                row.a, row.monodromy_dim, row.weight_dim, row.equal
            );
        }
    }
}

/// Dimension grid with `q` decreasing down the rows and `p` increasing across.
fn grid(s: &mut String, cells: &[PageCell]) {
    if cells.is_empty() {
        s.push_str("(all terms vanish)\n");
        return;
    }
    let dims: BTreeMap<(i64, i64), usize> = cells.iter().map(|c| ((c.p, c.q), c.dim)).collect();
    let (pmin, pmax) = (
        cells.iter().map(|c| c.p).min().unwrap(),
        cells.iter().map(|c| c.p).max().unwrap(),
    );
    let (qmin, qmax) = (
        cells.iter().map(|c| c.q).min().unwrap(),
        cells.iter().map(|c| c.q).max().unwrap(),
    );
    s.push_str("| q \\ p |");
    for p in pmin..=pmax {
        let _ = write!(s, " {p} |");
    }
    s.push_str("\n|---|");
    for _ in pmin..=pmax {
        s.push_str("---|");
    }
    s.push('\n');
    for q in (qmin..=qmax).rev() {
        let _ = write!(s, "| {q} |");
        for p in pmin..=pmax {
            match dims.get(&(p, q)) {
                Some(d) => {
                    let _ = write!(s, " {d} |");
                }
                None => s.push_str(" . |"),
            }
        }
        s.push('\n');
    }
}

fn weights(ws: &[WeightDim]) -> String {
    if ws.is_empty() {
        return "0".into();
    }
    ws.iter()
        .map(|w| format!("w{}:{}", w.weight, w.dim))
        .collect::<Vec<_>>()
        .join(", ")
}

fn rzss(s: &mut String, m: &RzssResult) {
    let _ = writeln!(s, "relative dimension n = {}\n", m.n);
    s.push_str("## E1 dimensions\n\n");
    grid(s, &m.e1);
    s.push_str("\n## E2 dimensions\n\n");
    grid(s, &m.e2);
    let _ = writeln!(s, "\ndegenerates at E2: {}", m.degenerates);
    s.push_str("\n## Limit cohomology\n\n| degree | dim | weights | rank N | mw pure |\n|---|---|---|---|---|\n");
    for h in &m.limits {
        let _ = writeln!(
            s,
            "| H^{} | {} | {} | {} | {} |",
            h.degree,
            h.dim,
            weights(&h.weights),
            h.monodromy_rank,
            h.mw_pure
        );
    }
    s.push_str("\n## Monodromy filtration jumps\n\n| degree | a | dim fil_a | dim gr_a |\n|---|---|---|---|\n");
    for h in &m.limits {
        for j in &h.monodromy_gr {
            let _ = writeln!(s, "| H^{} | {} | {} | {} |", h.degree, j.a, j.fil, j.gr);
        }
    }
    let _ = writeln!(
        s,
        "\n## Monodromy-weight criterion: {}\n",
        if m.mw_holds { "holds" } else { "fails" }
    );
    if !m.mw.is_empty() {
        s.push_str(
            "| i | a | source dim | target dim | rank | isomorphism |\n|---|---|---|---|---|---|\n",
        );
        for e in &m.mw {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                e.i, e.a, e.source_dim, e.target_dim, e.rank, e.isomorphism
            );
        }
    }
    let _ = writeln!(
        s,
        "\nEuler characteristic: E1 {}, E2 {}, limit {}",
        m.euler.e1, m.euler.e2, m.euler.limit
    );
    if !m.adjointness.is_empty() {
        s.push_str("\n## Gysin/restriction adjointness\n\n| from | to | degree | status |\n|---|---|---|---|\n");
        for a in &m.adjointness {
            let _ = writeln!(
                s,
                "| {:?} | {:?} | {} | {} |",
                a.from, a.to, a.degree, a.status
            );
        }
    }
}

fn lefscan(s: &mut String, m: &LefscanResult) {
    let _ = writeln!(
        s,
        "field F_{} (p = {}, k = {}, modulus {:?}), {} coordinates\n",
        m.field.q, m.field.p, m.field.k, m.field.modulus, m.nvars
    );
    for (i, c) in m.components.iter().enumerate() {
        let _ = writeln!(s, "- component {}: `{c}`", i + 1);
    }
    if let Some(p) = &m.pencil {
        let _ = writeln!(s, "- pencil: `{}` / `{}`", p.f0, p.f1);
    }
    let _ = writeln!(s, "\n## Verdict: {}\n\n{}\n", m.verdict, m.caveat);
    if let Some(sr) = &m.search {
        let _ = writeln!(
            s,
            "search: degree {}, seed {}, budget {}, attempts {}, degenerate draws {}, wrong count {}",
            sr.degree, sr.seed, sr.budget, sr.attempts, sr.degenerate_draws, sr.wrong_count
        );
        for (clause, n) in &sr.rejected {
            let _ = writeln!(s, "- rejected by {clause}: {n}");
        }
        s.push('\n');
    }
    if !m.moduli.is_empty() {
        s.push_str("| e | modulus of F_(q^e) |\n|---|---|\n");
        for md in &m.moduli {
            let _ = writeln!(s, "| {} | {:?} |", md.e, md.modulus);
        }
        s.push('\n');
    }
    s.push_str("## Critical points\n\n");
    if m.critical_points.is_empty() {
        let _ = writeln!(s, "no critical points found up to e_max = {}", m.e_max);
    } else {
        s.push_str("| e | point | stratum | value | minimal polynomial | Hessian rank | nondegenerate |\n|---|---|---|---|---|---|---|\n");
        for c in &m.critical_points {
            let value = c.value.map_or("inf".to_string(), |v| v.to_string());
            let _ = writeln!(
                s,
                "| {} | {:?} | {:?} | {} | {:?} | {}/{} | {} |",
                c.e,
                c.point,
                c.stratum,
                value,
                c.value_minpoly,
                c.hessian_rank,
                c.tangent_dim,
                c.nondegenerate
            );
        }
    }
    if !m.levels.is_empty() {
        s.push_str("\n## Scan\n\n| e | points scanned | on X | critical |\n|---|---|---|---|\n");
        for l in &m.levels {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                l.e, l.scanned, l.on_x, l.critical
            );
        }
    }
    if !m.base_points.is_empty() {
        s.push_str(
            "\n## Base points\n\n| e | point | stratum | transversal |\n|---|---|---|---|\n",
        );
        for b in &m.base_points {
            let _ = writeln!(
                s,
                "| {} | {:?} | {:?} | {} |",
                b.e, b.point, b.stratum, b.transversal
            );
        }
    }
    if !m.violations.is_empty() {
        s.push_str("\n## Violations\n\n");
        for v in &m.violations {
            let _ = writeln!(s, "- {}: {}", v.clause, v.detail);
        }
    }
}

fn critps(s: &mut String, m: &CritpsResult) {
    let _ = writeln!(
        s,
        "m = {}, precision {}, weights (π, X) = {:?}\n",
        m.m, m.precision, m.weights
    );
    for (i, b) in m.branches.iter().enumerate() {
        let _ = writeln!(s, "- X_{} = {}", i + 1, b.text);
    }
    let _ = writeln!(s, "- h = {}", m.h.text);
    let _ = writeln!(s, "- unit = {}", m.unit.text);
    let _ = writeln!(s, "- Weierstrass polynomial = {}", m.htilde.text);
    let _ = writeln!(s, "- T = {}", m.t_series.text);
    let _ = writeln!(
        s,
        "\ndegree e = {}, Eisenstein: {}, closed immersion in residue characteristic p iff p does not divide {}",
        m.e, m.eisenstein, m.closed_immersion_obstruction
    );
}

fn koszul(s: &mut String, m: &KoszulResult) {
    let _ = writeln!(s, "{} components, dimension {}\n", m.components, m.dim);
    s.push_str("| a | rank Λ^a | dim H^a |\n|---|---|---|\n");
    for (a, (r, h)) in m.lambda_ranks.iter().zip(&m.cohomology).enumerate() {
        let _ = writeln!(s, "| {a} | {r} | {h} |");
    }
    let _ = writeln!(s, "\nEuler characteristic {}", m.euler_characteristic);
    let _ = writeln!(s, "connected components: {:?}", m.connected_components);
}
