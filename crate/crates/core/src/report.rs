//! JSON report with per-number provenance, and the CSV profile format.

use std::io::{Read, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::pipeline::{ProfileRow, Report};

pub const CSV_HEADER: [&str; 6] = ["r", "u", "V", "f_of_u", "g_of_u", "decay_bound"];

fn section_origin(section: &str) -> &'static str {
    match section {
        "hypotheses" => "problem::check_hypotheses",
        "geometry" => "mountain_pass::compute_d, certificates::energy_bounds",
        "solve" => "mountain_pass::mpa_solve",
        "certificates" => "certificates::checks",
        "thresholds" => "certificates::thresholds",
        "sweep_pairs" => "pipeline::sweep (per-pair run at R_j)",
        "provenance" => "run configuration",
        "timings" => "wall clock",
        _ => "pipeline",
    }
}

fn anchor(key: &str) -> Option<&'static str> {
    Some(match key {
        "sobolev" => "best Sobolev constant S(N) in closed form",
        "alpha" => "negative-part defect α of V on Ω",
        "omega_measure" => "|Ω|, measure of the set where V < 0",
        "v2_inf" => "sampled inf over r ≥ R of r^{(N−2)(q−2)}·V(r)",
        "v4_inf" => "sampled inf over r ≥ R of exp(μ r^{κ})·V(r)",
        "v_infty" => "V∞ = sup of V on the bump ball",
        "c1" | "c2" => "lower bound F(r,s) ≥ c1|s|^θ − c2 on the bump ball",
        "d" => "upper bound d ≥ c from the bump ray, sup_t [t²A/2 − B t^θ] + c2|B_{r0}|",
        "t_star" => "maximizing ray parameter for d",
        "a" => "∫ |∇φ|² + V∞ φ² for the bump φ",
        "b" => "c1 ∫ |φ|^θ for the bump φ",
        "c_ar" => "Ambrosetti–Rabinowitz defect constant on {|s| < S₀}",
        "k_const" => "coercivity constant K = (θ−2)²/(4θ²)·(1 − α|Ω|^{2/N}/S)",
        "ball_volume" => "|B_R|",
        "norm_bound" => "a priori bound ‖u‖² ≤ (d + C_ar|B_R|)/K",
        "hat_c" => "a priori L^{2*} bound Ĉ",
        "beta" => "sampled energy floor on the sphere ‖u‖ = ρ",
        "rho" => "sphere radius ρ attaining the sampled floor",
        "level" => "mountain-pass level c = J(u)",
        "level_estimate" => "parabolic estimate of the final path maximum",
        "residual" => "dual norm of the energy gradient",
        "sup_norm" => "max |u_i| over the grid",
        "min_value" => "min u_i over the grid",
        "m" | "m_hat" => "Moser L∞ bound M(|u|_{2*})",
        "growth" => "near-zero growth constant C, |f(r,s)| ≤ C|s|^{q−1}",
        "k" => "penalization factor k = 2θ/(θ−2)",
        "lambda_star" => "λ* = k·C·M̂^{q−2}·R^{(N−2)(q−2)}",
        "lambda_tilde_star" => "λ̃* = C·M̂^{q−2}, radius free when S₀ = 0",
        "mu_star" => "μ* = (a/2)/(M̂ R^{N−2})^q",
        "margin" => "certificate margin, nonnegative when the check holds",
        "ln_left" | "ln_right" => "logarithm of one side of the Moser iteration step",
        "ratio" => "exp(ln_right − ln_left) for one Moser step",
        "d_l" => "multi-bump upper bound D_l",
        "tau" | "tau_prime" | "sigma" => "Moser iteration exponents",
        "a3" | "a4" => "Moser iteration coefficients",
        _ => return None,
    })
}

fn source(path: &[String]) -> String {
    let section = path.first().map(String::as_str).unwrap_or("");
    let key = path
        .iter()
        .rev()
        .find(|k| k.parse::<usize>().is_err())
        .map(String::as_str)
        .unwrap_or("");
    let origin = section_origin(section);
    match anchor(key) {
        Some(a) => format!("{origin}: {a}"),
        None => format!("{origin}: {}", path.join(".")),
    }
}

fn wrap(value: Value, path: &mut Vec<String>) -> Value {
    match value {
        Value::Number(_) => json!({ "value": value, "source": source(path) }),
        Value::Array(items) => Value::Array(
            items
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    path.push(i.to_string());
                    let w = wrap(v, path);
                    path.pop();
                    w
                })
                .collect(),
        ),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| {
                    path.push(k.clone());
                    let w = if v.is_null() && path.len() > 1 {
                        json!({ "value": null, "source": source(path) })
                    } else {
                        wrap(v, path)
                    };
                    path.pop();
                    (k, w)
                })
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

/// JSON view of a report. Every number becomes `{value, source}`; non-finite
/// values appear as `null`. Timings are included only when asked for.
pub fn report_json(report: &Report, with_timings: bool) -> Result<Value> {
    let mut raw = serde_json::to_value(report).map_err(|e| Error::Numerical(format!("report encoding: {e}")))?;
    if let Value::Object(map) = &mut raw {
        if !with_timings {
            map.insert("timings".into(), Value::Null);
        }
    }
    Ok(wrap(raw, &mut Vec::new()))
}

pub fn write_report(path: &Path, report: &Report, with_timings: bool) -> Result<()> {
    let value = report_json(report, with_timings)?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::Numerical(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Precondition(format!("profile CSV: {other:?}")),
    }
}

pub fn write_profile<W: Write>(out: W, rows: &[ProfileRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for row in rows {
        let decay = row.decay_bound.map(|d| format!("{d:.16e}")).unwrap_or_default();
        w.write_record([
            format!("{:.16e}", row.r),
            format!("{:.16e}", row.u),
            format!("{:.16e}", row.v),
            format!("{:.16e}", row.f),
            format!("{:.16e}", row.g),
            decay,
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile_file(path: &Path, rows: &[ProfileRow]) -> Result<()> {
    write_profile(std::fs::File::create(path)?, rows)
}

/// Reads the `r` and `u` columns of a profile CSV.
pub fn read_profile<R: Read>(input: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(csv_error)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Precondition(format!("profile CSV lacks a `{name}` column")))
    };
    let (ir, iu) = (col("r")?, col("u")?);
    let (mut r, mut u) = (Vec::new(), Vec::new());
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let parse = |i: usize| -> Result<f64> {
            let cell = rec.get(i).unwrap_or("");
            cell.trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("profile CSV row {}: bad number `{cell}`", line + 2)))
        };
        r.push(parse(ir)?);
        u.push(parse(iu)?);
    }
    Ok((r, u))
}

pub fn read_profile_file(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    read_profile(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_sources() {
        let v = wrap(json!({"thresholds": {"lambda_star": 2.5, "list": [1, 2]}, "flag": true}), &mut Vec::new());
        let ls = &v["thresholds"]["lambda_star"];
        assert_eq!(ls["value"], json!(2.5));
        assert!(ls["source"].as_str().unwrap().starts_with("certificates::thresholds"));
        assert_eq!(v["thresholds"]["list"][1]["value"], json!(2));
        assert_eq!(v["flag"], json!(true));
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            ProfileRow { r: 0.0, u: 1.5, v: 2.0, f: 2.25, g: 2.25, decay_bound: None },
            ProfileRow { r: 1.0, u: 0.1, v: 1.0, f: 0.01, g: 0.01, decay_bound: Some(3.0) },
        ];
        let mut buf = Vec::new();
        write_profile(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "r,u,V,f_of_u,g_of_u,decay_bound");
        assert_eq!(lines.next().unwrap(), "0.0000000000000000e0,1.5000000000000000e0,2.0000000000000000e0,2.2500000000000000e0,2.2500000000000000e0,");
        let (r, u) = read_profile(buf.as_slice()).unwrap();
        assert_eq!(r, vec![0.0, 1.0]);
        assert_eq!(u, vec![1.5, 0.1]);
    }

    #[test]
    fn missing_column_rejected() {
        assert!(read_profile("x,y\n1,2\n".as_bytes()).is_err());
    }
}
