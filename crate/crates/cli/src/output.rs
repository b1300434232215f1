//! Output plumbing: fixed-precision serialization and the report schemas.
//!
//! JSON numbers are printed with 17 significant digits so doubles round-trip
//! exactly; CSV uses 10 significant digits, which is plenty for plotting.

use std::io::{self, Write};

use serde_json::ser::Formatter;
use serde_json::{json, Serializer, Value};

use sqdx::sqd::SqdReport;

/// serde_json formatter printing every float as `{:.16e}`.
struct SciNotation;

impl Formatter for SciNotation {
    fn write_f64<W: Write + ?Sized>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        let value = if value == 0.0 { 0.0 } else { value }; // drop the sign of -0.0
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_string<T: serde::Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, SciNotation);
    value.serialize(&mut ser).expect("report serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serialized JSON is utf-8")
}

/// CSV cell with 10 significant digits.
pub fn csv_num(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.9e}")
}

pub fn report_to_json(report: &SqdReport) -> Value {
    json!({
        "report": "sqd-v1",
        "x": report.x,
        "sqd": report.sqd,
        "mutual_information": report.mutual.i,
        "classical_correlation": report.classical_corr,
        "conditional_entropy_min": report.cond_entropy_min,
        "z_hat": report.opt.z_hat,
        "f_min": report.opt.f_min,
        "case": report.opt.case.kind.as_str(),
        "method": report.opt.method.as_str(),
        "entropy": {
            "s_a": report.mutual.s_a,
            "s_b": report.mutual.s_b,
            "s_ab": report.mutual.s_ab,
        },
        "spectrum": report.spectrum.as_array(),
        "bloch": bloch_json(&report.bloch),
        "iterations": report
            .opt
            .iterations
            .iter()
            .map(|step| json!({"z": step.z, "f": step.f, "f_prime": step.f_prime}))
            .collect::<Vec<_>>(),
        "projective_limit": report.x >= sqdx::weakmeas::PROJECTIVE_X,
    })
}

pub fn bloch_json(p: &sqdx::BlochX) -> Value {
    json!({
        "r": p.r,
        "s": p.s,
        "c3": p.c3,
        "c1": [p.c1.re, p.c1.im],
        "c2": [p.c2.re, p.c2.im],
        "b": p.b(),
    })
}

/// One `x,z_hat,f_min,sqd,case` CSV row.
pub fn sweep_x_row(report: &SqdReport) -> String {
    format!(
        "{},{},{},{},{}",
        csv_num(report.x),
        csv_num(report.opt.z_hat),
        csv_num(report.opt.f_min),
        csv_num(report.sqd),
        report.opt.case.kind.as_str()
    )
}

pub const SWEEP_X_HEADER: &str = "x,z_hat,f_min,sqd,case";
pub const SWEEP_GAMMA_HEADER: &str = "gamma,z_hat,sqd,sqd_undamped,delta";
