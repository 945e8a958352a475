use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use eqloc::borel::{uct_check, BorelComplex};
use eqloc::complexes::{cohomology_f2, ss_pages, GradedF2};
use eqloc::flowmodel::{derive_operators, generate_examples, FlowSystem, EXAMPLE_NAMES};
use eqloc::io::curve::AnyField;
use eqloc::io::{CurveDoc, DatumDoc, Document};
use eqloc::localize::{
    assemble_total, build_equiv, build_equiv_at, normalized_lambda, smith_report, twisted_diff, EquivComplex,
    LocalizationDatum,
};
use eqloc::slicecurve::{check_point, divisor_to_uvw, triple_to_matrix, uvw_to_divisor, Field};
use eqloc::{Error, Result};

use crate::{read_input, Cli, Command, ExamplesOp, MumfordOp};

pub struct Output {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn ok(json: Value, text: String) -> Result<Output> {
    Ok(Output { json, text, passed: true })
}

fn load(path: &str) -> Result<Document> {
    Document::parse(&read_input(path)?)
}

fn wrong_kind(doc: &Document, expected: &str) -> Error {
    Error::Parse {
        path: "$".into(),
        message: format!("expected {expected}, found a {} document", doc.kind()),
    }
}

pub fn datum_of(doc: &Document) -> Result<LocalizationDatum> {
    match doc {
        Document::Datum(d) => d.to_datum(),
        Document::Flow(f) => derive_operators(f),
        other => Err(wrong_kind(other, "a datum or flow system")),
    }
}

pub fn borel_of(doc: &Document) -> Result<BorelComplex> {
    match doc {
        Document::Complex(c) => c.borel(),
        Document::Datum(_) | Document::Flow(_) => Ok(assemble_total(&datum_of(doc)?)?.borel),
        other => Err(wrong_kind(other, "a complex, datum or flow system")),
    }
}

pub fn equiv_of(d: &LocalizationDatum, precision: Option<usize>) -> Result<EquivComplex> {
    match precision {
        Some(n) => build_equiv_at(d, n),
        None => build_equiv(d),
    }
}

fn validate(doc: &Document) -> Result<Output> {
    let mut checks: Vec<String> = Vec::new();
    match doc {
        Document::Complex(c) => {
            c.complex()?;
            checks.push("degrees and d∘d = 0".into());
            if c.involution.is_some() {
                c.involutive()?;
                checks.push("involution is a chain map squaring to the identity".into());
            }
            if c.terms.is_some() {
                c.borel()?;
                checks.push("Borel terms satisfy their relations".into());
            }
        }
        Document::Datum(_) | Document::Flow(_) => {
            if let Document::Flow(f) = doc {
                f.validate()?;
                checks.push("flow system structure and cover data".into());
            }
            let r = datum_of(doc)?.validate()?;
            checks.extend(r.checks);
        }
        Document::Twisted(t) => {
            twisted_diff(&t.to_datum()?)?;
            checks.push("twisted d∘d = 0 over F2[q, q^-1]".into());
        }
        Document::Curve(c) => {
            let names = match c.field.resolve()? {
                AnyField::Q(f) => validate_curve(c, &f)?,
                AnyField::P(f) => validate_curve(c, &f)?,
            };
            checks.extend(names);
        }
    }
    let mut text = format!("{} document: valid\n", doc.kind());
    for c in &checks {
        let _ = writeln!(text, "  {c}");
    }
    ok(json!({ "kind": doc.kind(), "valid": true, "checks": checks }), text)
}

fn validate_curve<F: Field>(c: &CurveDoc, f: &F) -> Result<Vec<String>> {
    let curve = c.curve(f)?;
    let mut out = vec![format!("f monic, centred, degree {}", 2 * curve.m)];
    if c.divisor.is_some() {
        c.divisor(f)?.check(&curve)?;
        out.push("divisor on the curve with no hyperelliptic fibre".into());
    }
    if c.triple.is_some() {
        c.triple(f)?.check(&curve)?;
        out.push("UW - V^2 = f".into());
    }
    if c.blocks.is_some() {
        let r = check_point(&c.slice(f)?, &curve);
        if !r.det_identity {
            return Err(Error::InvariantViolated("det(x - A) differs from det(A(x))".into()));
        }
        out.push("det(x - A) = det(A(x))".into());
    }
    Ok(out)
}

fn cohomology(doc: &Document) -> Result<Output> {
    let (dims, inv) = match doc {
        Document::Complex(c) => (cohomology_f2(&c.complex()?)?, None),
        Document::Datum(_) | Document::Flow(_) => {
            let d = datum_of(doc)?;
            let total = assemble_total(&d)?;
            let inv = GradedF2::new(d.c_inv.degrees(), d.d_inv.clone())?.cohomology().dims();
            (cohomology_f2(&total.involutive.complex)?, Some(inv))
        }
        other => return Err(wrong_kind(other, "a complex, datum or flow system")),
    };
    let total: usize = dims.values().sum();
    let mut text = format!("dim H = {total}\n");
    for (n, k) in &dims {
        let _ = writeln!(text, "  H^{n}: {k}");
    }
    let mut j = json!({ "dims": dims, "total": total });
    if let Some(inv) = inv {
        let _ = writeln!(text, "dim H(C_inv) = {}", inv.values().sum::<usize>());
        j["inv_dims"] = value(&inv);
    }
    ok(j, text)
}

fn borel(doc: &Document, precision: Option<usize>) -> Result<Output> {
    let b = borel_of(doc)?;
    let inv = match precision {
        Some(n) => b.module_invariants_at(n)?,
        None => b.module_invariants()?,
    };
    let uct = uct_check(&b)?;
    let text = format!(
        "free generators in degrees {:?}; torsion (degree, exponent) {:?}\nr_free + 2 r_tor = {} + 2·{} vs dim H = {}: {}\n",
        inv.free,
        inv.torsion,
        uct.r_free,
        uct.r_tor,
        uct.dim_h,
        if uct.passed { "pass" } else { "FAIL" }
    );
    Ok(Output {
        json: json!({ "invariants": inv, "r_free": inv.r_free(), "r_tor": inv.r_tor(), "uct": uct }),
        text,
        passed: uct.passed,
    })
}

fn equiv(doc: &Document, precision: Option<usize>) -> Result<Output> {
    let e = equiv_of(&datum_of(doc)?, precision)?;
    let inv = e.invariants().clone();
    let text = format!(
        "C_equiv: dimension {} at {} levels (precision {})\nmodule invariants: free {:?}, torsion {:?}\n",
        e.dim(),
        e.levels,
        e.precision,
        inv.free,
        inv.torsion
    );
    ok(
        json!({
            "dim": e.dim(),
            "precision": e.precision,
            "levels": e.levels,
            "nilpotency_index": e.nilpotency_index,
            "invariants": inv,
            "borel_invariants": e.borel_invariants,
        }),
        text,
    )
}

fn localize(doc: &Document, precision: Option<usize>) -> Result<Output> {
    let e = equiv_of(&datum_of(doc)?, precision)?;
    let r = normalized_lambda(&e)?;
    let text = format!(
        "m = {}\nfree rank {}, torsion rank {}, dim H(C_inv) = {}\nP_coker(t) = {}\n",
        r.m,
        r.r_free,
        r.r_tor,
        r.dim_h_inv,
        if r.coker_poly_text.is_empty() { "0" } else { &r.coker_poly_text }
    );
    ok(value(&r), text)
}

fn smith(doc: &Document) -> Result<Output> {
    let r = smith_report(&datum_of(doc)?)?;
    let text = format!(
        "dim H(C_inv) = {}, dim H(C) = {}, r_free = {}, r_tor = {}\nequality: {}; E1 degenerate: {}\n",
        r.dim_h_inv, r.dim_h_total, r.r_free, r.r_tor, r.equality, r.e1_degenerate
    );
    ok(value(&r), text)
}

fn pages(doc: &Document, pages: usize, precision: Option<usize>) -> Result<Output> {
    let b = borel_of(doc)?;
    let r = ss_pages(&b.assembled, pages, precision.unwrap_or(pages + 1))?;
    let text = format!(
        "{} pages; columns below {} exact; degenerates at {}\n",
        r.pages.len(),
        r.resolved,
        r.degenerates_at.map_or("not within range".to_string(), |p| format!("E{p}"))
    );
    ok(value(&r), text)
}

fn flow_derive(doc: &Document) -> Result<Output> {
    let Document::Flow(f) = doc else {
        return Err(wrong_kind(doc, "a flow system"));
    };
    let d = derive_operators(f)?;
    let text = format!("derived datum: {} fixed and {} free generators\n", d.n_inv(), d.n_non());
    ok(value(&DatumDoc::from_datum(&d)), text)
}

fn twisted(doc: &Document) -> Result<Output> {
    let Document::Twisted(t) = doc else {
        return Err(wrong_kind(doc, "a twisted complex"));
    };
    let r = twisted_diff(&t.to_datum()?)?;
    ok(value(&r), format!("dim H_twisted = {}\n", r.total_dim))
}

fn curve_doc(doc: &Document) -> Result<&CurveDoc> {
    match doc {
        Document::Curve(c) => Ok(c),
        other => Err(wrong_kind(other, "a curve document")),
    }
}

fn mumford_to_matrix<F: Field>(c: &CurveDoc, f: &F) -> Result<Output> {
    let curve = c.curve(f)?;
    let t = divisor_to_uvw(&curve, &c.divisor(f)?)?;
    let s = triple_to_matrix(&curve, &t)?;
    let out = CurveDoc {
        field: c.field.clone(),
        f: c.f.clone(),
        divisor: c.divisor.clone(),
        triple: Some(CurveDoc::write_triple(&t)),
        blocks: Some(CurveDoc::write_blocks(&s)),
    };
    let text = format!("U = {}\nV = {}\nW = {}\n", t.u, t.v, t.w);
    ok(value(&out), text)
}

fn mumford_to_divisor<F: Field>(c: &CurveDoc, f: &F) -> Result<Output> {
    let curve = c.curve(f)?;
    let t = c.triple(f)?;
    let d = uvw_to_divisor(&curve, &t)?;
    let out = CurveDoc {
        field: c.field.clone(),
        f: c.f.clone(),
        divisor: Some(CurveDoc::write_divisor(f, &d)),
        triple: c.triple.clone(),
        blocks: None,
    };
    let mut text = String::new();
    for p in &d.points {
        let _ = writeln!(text, "({}, {}) × {}", f.format(&p.x), f.format(&p.y), p.mult);
    }
    ok(value(&out), text)
}

fn mumford_check<F: Field>(c: &CurveDoc, f: &F) -> Result<Output> {
    let curve = c.curve(f)?;
    let r = check_point(&c.slice(f)?, &curve);
    let pass = |b: bool| if b { "pass" } else { "fail" };
    let text = format!(
        "det identity: {}; fixed locus: {}; over f: {}\n",
        pass(r.det_identity),
        pass(r.fixed_locus),
        pass(r.over_target)
    );
    let json = json!({
        "det_identity": r.det_identity,
        "fixed_locus": r.fixed_locus,
        "over_target": r.over_target,
        "char_poly": eqloc::io::curve::write_poly(&r.char_poly),
        "det_a_x": eqloc::io::curve::write_poly(&r.det_a_x),
        "triple": r.triple.as_ref().map(CurveDoc::write_triple),
    });
    Ok(Output {
        json,
        text,
        passed: r.det_identity,
    })
}

fn mumford(op: &MumfordOp, doc: &Document) -> Result<Output> {
    let which = match op {
        MumfordOp::ToMatrix { .. } => 0,
        MumfordOp::ToDivisor { .. } => 1,
        MumfordOp::Check { .. } => 2,
    };
    let c = curve_doc(doc)?;
    macro_rules! dispatch {
        ($f:expr) => {
            match which {
                0 => mumford_to_matrix(c, $f),
                1 => mumford_to_divisor(c, $f),
                _ => mumford_check(c, $f),
            }
        };
    }
    match c.field.resolve()? {
        AnyField::Q(f) => dispatch!(&f),
        AnyField::P(f) => dispatch!(&f),
    }
}

fn examples(op: &ExamplesOp) -> Result<Output> {
    match op {
        ExamplesOp::List => {
            let mut names: Vec<String> = EXAMPLE_NAMES.iter().map(|s| s.to_string()).collect();
            names.push("product(<name>, <name>)".into());
            let text = names.iter().map(|n| format!("{n}\n")).collect();
            ok(json!({ "examples": names }), text)
        }
        ExamplesOp::Emit { name } => {
            let s: FlowSystem = generate_examples(name)?;
            ok(value(&s), String::new())
        }
    }
}

fn input_of(cmd: &Command) -> Option<&str> {
    match cmd {
        Command::Validate { input }
        | Command::Cohomology { input }
        | Command::Borel { input }
        | Command::Equiv { input }
        | Command::Localize { input }
        | Command::SmithReport { input }
        | Command::SsPages { input, .. }
        | Command::FlowDerive { input }
        | Command::Twisted { input } => Some(input),
        Command::Mumford { op } => Some(match op {
            MumfordOp::ToMatrix { input } | MumfordOp::ToDivisor { input } | MumfordOp::Check { input } => input,
        }),
        Command::Examples { .. } => None,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let p = cli.precision;
    if p == Some(0) {
        return Err(Error::Parse {
            path: "--precision".into(),
            message: "precision must be positive".into(),
        });
    }
    let doc = input_of(&cli.command).map(load).transpose()?;
    let doc_ref = || doc.as_ref().expect("document loaded");
    let mut out = match &cli.command {
        Command::Validate { .. } => validate(doc_ref()),
        Command::Cohomology { .. } => cohomology(doc_ref()),
        Command::Borel { .. } => borel(doc_ref(), p),
        Command::Equiv { .. } => equiv(doc_ref(), p),
        Command::Localize { .. } => localize(doc_ref(), p),
        Command::SmithReport { .. } => smith(doc_ref()),
        Command::SsPages { pages: n, .. } => pages(doc_ref(), *n, p),
        Command::FlowDerive { .. } => flow_derive(doc_ref()),
        Command::Twisted { .. } => twisted(doc_ref()),
        Command::Mumford { op } => mumford(op, doc_ref()),
        Command::Examples { op } => examples(op),
    }?;
    if cli.self_check {
        let results = match &doc {
            Some(d) => crate::selfcheck::run(d, p),
            None => Vec::new(),
        };
        let all = results.iter().all(|r| r.passed);
        for r in &results {
            let _ = writeln!(out.text, "self-check {}: {}", r.check, if r.passed { "pass" } else { "FAIL" });
            if let Some(d) = &r.detail {
                let _ = writeln!(out.text, "  {d}");
            }
        }
        if let Value::Object(map) = &mut out.json {
            map.insert("self_check".into(), value(&results));
        }
        out.passed &= all;
    }
    Ok(out)
}
