//! The `--self-check` suite. Each check runs independently; a failing check
//! records its error instead of aborting the rest.

use serde::Serialize;

use eqloc::borel::uct_check;
use eqloc::io::curve::AnyField;
use eqloc::io::{from_json, to_json, ComplexDoc, CurveDoc, DatumDoc, Document};
use eqloc::localize::{normalized_lambda, smith_report};
use eqloc::slicecurve::{divisor_to_uvw, uvw_to_divisor, Field};
use eqloc::{Error, Result};

use crate::commands::{borel_of, datum_of, equiv_of};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn record(out: &mut Vec<CheckResult>, name: &str, r: Result<()>) {
    out.push(CheckResult {
        check: name.into(),
        passed: r.is_ok(),
        detail: r.err().map(|e| e.to_string()),
    });
}

fn fail(msg: String) -> Result<()> {
    Err(Error::InvariantViolated(msg))
}

fn borel_checks(doc: &Document, precision: Option<usize>, out: &mut Vec<CheckResult>) {
    let b = match borel_of(doc) {
        Ok(b) => b,
        Err(e) => return record(out, "borel complex", Err(e)),
    };
    let n = precision.unwrap_or_else(|| b.default_precision());
    record(out, "invariants stable at N and 2N", b.module_invariants_at(n).map(|_| ()));
    record(
        out,
        "universal coefficients",
        uct_check(&b).and_then(|u| {
            if u.passed {
                Ok(())
            } else {
                fail(format!("{} + 2·{} vs dim H = {}", u.r_free, u.r_tor, u.dim_h))
            }
        }),
    );
}

fn datum_checks(doc: &Document, precision: Option<usize>, out: &mut Vec<CheckResult>) {
    let d = match datum_of(doc) {
        Ok(d) => d,
        Err(e) => return record(out, "datum", Err(e)),
    };
    record(out, "datum relations", d.validate().map(|_| ()));
    record(out, "Smith report", smith_report(&d).map(|_| ()));
    let loc = equiv_of(&d, precision).and_then(|e| normalized_lambda(&e)).and_then(|r| {
        if r.r_free != r.dim_h_inv || r.rank_lambda != r.dim_h_inv {
            return fail(format!(
                "rank {} and free rank {} vs dim H(C_inv) = {}",
                r.rank_lambda, r.r_free, r.dim_h_inv
            ));
        }
        Ok(())
    });
    record(out, "localization is an isomorphism after inverting q", loc);
    let text = to_json(&DatumDoc::from_datum(&d));
    let rt = from_json::<DatumDoc>(&text).and_then(|back| {
        let again = to_json(&DatumDoc::from_datum(&back.to_datum()?));
        if again == text {
            Ok(())
        } else {
            fail("datum changed on re-emission".into())
        }
    });
    record(out, "datum round trip", rt);
}

fn curve_checks<F: Field>(c: &CurveDoc, f: &F, out: &mut Vec<CheckResult>) {
    let curve = match c.curve(f) {
        Ok(curve) => curve,
        Err(e) => return record(out, "curve", Err(e)),
    };
    if c.divisor.is_some() {
        let rt = c.divisor(f).and_then(|d| {
            let back = uvw_to_divisor(&curve, &divisor_to_uvw(&curve, &d)?)?;
            if back == d {
                Ok(())
            } else {
                fail("divisor changed through its triple".into())
            }
        });
        record(out, "divisor round trip", rt);
    }
    if c.triple.is_some() {
        let rt = c.triple(f).and_then(|t| match uvw_to_divisor(&curve, &t) {
            Ok(d) => {
                if divisor_to_uvw(&curve, &d)? == t {
                    Ok(())
                } else {
                    fail("triple changed through its divisor".into())
                }
            }
            // A triple whose U does not split has no divisor over the field.
            Err(Error::DoesNotSplit(_)) => t.check(&curve),
            Err(e) => Err(e),
        });
        record(out, "triple round trip", rt);
    }
}

pub fn run(doc: &Document, precision: Option<usize>) -> Vec<CheckResult> {
    let mut out = Vec::new();
    match doc {
        Document::Complex(c) => {
            record(&mut out, "complex", c.complex().map(|_| ()));
            if c.involution.is_some() || c.terms.is_some() {
                borel_checks(doc, precision, &mut out);
            }
            let text = to_json(c);
            let rt = from_json::<ComplexDoc>(&text).and_then(|back| {
                if to_json(&back) == text {
                    Ok(())
                } else {
                    fail("complex changed on re-emission".into())
                }
            });
            record(&mut out, "complex round trip", rt);
        }
        Document::Datum(_) | Document::Flow(_) => {
            datum_checks(doc, precision, &mut out);
            borel_checks(doc, precision, &mut out);
        }
        Document::Twisted(t) => {
            record(&mut out, "twisted differential", t.to_datum().and_then(|d| eqloc::localize::twisted_diff(&d)).map(|_| ()));
        }
        Document::Curve(c) => match c.field.resolve() {
            Ok(AnyField::Q(f)) => curve_checks(c, &f, &mut out),
            Ok(AnyField::P(f)) => curve_checks(c, &f, &mut out),
            Err(e) => record(&mut out, "field", Err(e)),
        },
    }
    out
}
