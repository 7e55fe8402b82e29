//! Text and structured renderings of verifier output and cost tables.

use std::fmt::Write;

use serde_json::json;

use hrqss::scheme::CostRow;
use hrqss::verify::{SubsetClassification, VerificationReport};

/// Formats a value with up to 12 decimals and no trailing zeros.
pub fn num(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn subset(players: &[usize]) -> String {
    format!("{{{}}}", players.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

pub fn text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scheme {} ({} players, {:?} route)", r.scheme.label(), r.scheme.players(), r.route);
    let _ = writeln!(out, "{:<16} {:<13} {:<13} {:>10} {:>10} {:>10} {:>10}", "subset", "declared", "observed", "max TD", "MI bits", "1-fid", "points");
    for c in &r.subsets {
        let e = &c.evidence;
        let _ = writeln!(
            out,
            "{:<16} {:<13} {:<13} {:>10} {:>10} {:>10} {:>10}{}",
            subset(&c.subset),
            c.declared.name(),
            c.observed.name(),
            opt(e.max_trace_distance),
            opt(e.classical_mi_bits),
            opt(e.min_fidelity.map(|f| 1.0 - f)),
            e.points,
            if c.declared == c.observed { "" } else { "  MISMATCH" }
        );
    }
    let _ = writeln!(out, "monotone: {}, no-cloning: {}", r.monotone, r.no_cloning);
    let _ = writeln!(
        out,
        "{} secrets for forbidden checks, {} for authorized ({} randomness points, {}), {} thread(s), {:.2}s",
        r.stats.forbidden_secrets,
        r.stats.authorized_secrets,
        r.stats.authorized_points,
        if r.stats.authorized_exhaustive { "exhaustive" } else { "sampled" },
        r.stats.threads,
        r.stats.elapsed_secs
    );
    let failures = r.failures().count();
    let _ = writeln!(out, "result: {}", if r.pass { "PASS".to_string() } else { format!("FAIL ({failures} subset(s))") });
    out
}

fn subset_json(c: &SubsetClassification) -> serde_json::Value {
    json!({
        "subset": c.subset,
        "declared": c.declared.name(),
        "observed": c.observed.name(),
        "ok": c.declared == c.observed,
        "max_trace_distance": c.evidence.max_trace_distance,
        "classical_mi_bits": c.evidence.classical_mi_bits,
        "min_fidelity": c.evidence.min_fidelity,
        "complement_trace_distance": c.evidence.complement_trace_distance,
        "points": c.evidence.points.to_string(),
    })
}

/// JSON with one key per line and one subset per line.
pub fn structured(r: &VerificationReport) -> String {
    let header = [
        ("scheme", json!(r.scheme.label())),
        ("players", json!(r.scheme.players())),
        ("route", json!(format!("{:?}", r.route).to_lowercase())),
        ("pass", json!(r.pass)),
        ("monotone", json!(r.monotone)),
        ("no_cloning", json!(r.no_cloning)),
        ("stats", serde_json::to_value(&r.stats).unwrap_or_default()),
    ];
    let mut out = String::from("{\n");
    for (key, value) in header {
        let _ = writeln!(out, "  \"{key}\": {value},");
    }
    out.push_str("  \"subsets\": [\n");
    let rows: Vec<String> = r.subsets.iter().map(|c| format!("    {}", subset_json(c))).collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}

pub fn cost(k: usize, n: usize, d: usize, rows: &[CostRow], minimum: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(k,n) = ({k},{n}), d_s = {d}");
    let _ = writeln!(out, "{:>5} {:>5} {:>5} {:>14} {:>12} {:>14} {:>14}", "n_qr", "k_qr", "L_qr", "qubits/share", "total Q", "quantum share", "classical share");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>5} {:>14} {:>12} {:>14} {:>14}",
            r.n_qr,
            r.k_qr,
            r.l_qr,
            num(r.qubits_per_share),
            num(r.total_qubits),
            r.quantum_share.name(),
            r.classical_share.map_or("-", |b| b.name())
        );
    }
    let _ = writeln!(out, "lower limit n·log2(d_s)/(2k−n) = {}", num(minimum));
    out
}
