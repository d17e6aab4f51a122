use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use arithdyn::heights::{bad_places, height_decomposition};
use arithdyn::{PolynomialMap, RationalPoint};

use crate::{Command, Options};

pub const SCHEMA: &str = "arithdyn/1";

/// The `arithdyn/1` report: `{map, degrees, points, report, meta}`.
pub(crate) struct Document {
    command: Command,
    map: Value,
    pub degrees: Value,
    pub points: Vec<Value>,
    pub report: Value,
    meta: Map<String, Value>,
    pub timing_ms: Option<f64>,
}

impl Document {
    pub fn new(command: Command, opts: &Options) -> Self {
        let meta = json!({
            "schema": SCHEMA,
            "command": command.name(),
            "seed": opts.seed,
            "max_iter": opts.max_iter,
            "bit_budget": opts.bit_budget,
            "tol": opts.tol,
            "trials": opts.trials,
            "degree_budget": opts.degree_budget,
            "degree_iter": opts.degree_iter,
            "zero_threshold": opts.zero_threshold,
            "height_bound": opts.height_bound,
        });
        let Value::Object(meta) = meta else { unreachable!() };
        Document {
            command,
            map: Value::Null,
            degrees: Value::Null,
            points: Vec::new(),
            report: Value::Null,
            meta,
            timing_ms: None,
        }
    }

    pub fn set_map(&mut self, f: &PolynomialMap) {
        self.map = json!(arithdyn::expr::format_map(f));
    }

    fn value(&self) -> Value {
        let mut meta = self.meta.clone();
        if let Some(t) = self.timing_ms {
            meta.insert("timing_ms".into(), json!(t));
        }
        json!({
            "map": self.map,
            "degrees": self.degrees,
            "points": self.points,
            "report": self.report,
            "meta": meta,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let (header, rows) = self.table();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for r in rows {
            w.write_record(&r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(m) = self.map.as_str() {
            out.push_str(&format!("map: {m}\n"));
        }
        if self.command != Command::Degrees && !self.degrees.is_null() {
            let d = &self.degrees;
            out.push_str(&format!(
                "lambda1 = {} (root of {}), lambda2 = {}, l = {}, small topological degree: {}\n",
                cell(&d["lambda1"]["decimal"]),
                cell(&d["lambda1"]["polynomial"]),
                cell(&d["lambda2"]),
                or_dash(cell(&d["growth_exponent"])),
                cell(&d["small_topological_degree"]),
            ));
            if self.command == Command::Dyndeg {
                return out;
            }
        }
        let (header, rows) = self.table();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let s: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            s.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(&header));
        for r in &rows {
            out.push_str(&line(r));
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("time: {t:.1} ms\n"));
        }
        out
    }

    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut rows = Vec::new();
        match self.command {
            Command::Degrees => {
                let d = &self.degrees;
                for (n, v) in d["values"].as_array().into_iter().flatten().enumerate() {
                    let primes: Vec<String> = d["primes_used"][n]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(cell)
                        .collect();
                    rows.push(vec![n.to_string(), cell(v), cell(&d["verified"][n]), primes.join(";")]);
                }
                (h(&["n", "degree", "verified", "primes"]), rows)
            }
            Command::Dyndeg => {
                let d = &self.degrees;
                for (k, v) in [
                    ("lambda1", &d["lambda1"]["decimal"]),
                    ("lambda1_polynomial", &d["lambda1"]["polynomial"]),
                    ("lambda1_error_bound", &d["lambda1"]["error_bound"]),
                    ("lambda2", &d["lambda2"]),
                    ("growth_exponent", &d["growth_exponent"]),
                    ("small_topological_degree", &d["small_topological_degree"]),
                    ("bezout_holds", &d["bezout_holds"]),
                ] {
                    rows.push(vec![k.to_string(), cell(v)]);
                }
                (h(&["field", "value"]), rows)
            }
            Command::Height => {
                for p in &self.points {
                    rows.push(vec![cell(&p["point"]), cell(&p["global_log_arg"]), cell(&p["height"]), locals_cell(p)]);
                }
                (h(&["point", "global_log_arg", "height", "locals"]), rows)
            }
            Command::Orbit => {
                for p in &self.points {
                    let o = &p["orbit"];
                    for (n, q) in o["points"].as_array().into_iter().flatten().enumerate() {
                        rows.push(vec![
                            cell(&p["point"]),
                            n.to_string(),
                            cell(&q[0]),
                            cell(&q[1]),
                            cell(&o["height_log_arguments"][n]),
                            cell(&o["heights"][n]),
                        ]);
                    }
                }
                (h(&["point", "n", "x1", "x2", "height_log_arg", "height"]), rows)
            }
            Command::Classify => {
                for p in &self.points {
                    let c = &p["class"];
                    let detail = match c["verdict"].as_str() {
                        Some("periodic") => format!("preperiod={};period={}", cell(&c["preperiod"]), cell(&c["period"])),
                        Some("height_growing") => format!("rate={}", cell(&c["rate"])),
                        _ => cell(&c["note"]),
                    };
                    rows.push(vec![cell(&p["point"]), cell(&c["verdict"]), detail, cell(&p["iterations"])]);
                }
                (h(&["point", "verdict", "detail", "iterations"]), rows)
            }
            Command::Canheight => {
                for p in &self.points {
                    let c = &p["canonical_height"];
                    rows.push(vec![
                        cell(&p["point"]),
                        cell(&c["value"]),
                        cell(&c["iterations_used"]),
                        cell(&c["tail_delta"]),
                        cell(&c["converged"]),
                        cell(&c["certified_zero"]),
                    ]);
                }
                (h(&["point", "hhat", "iterations", "tail_delta", "converged", "certified_zero"]), rows)
            }
            Command::Analyze => {
                for (p, r) in self.points.iter().zip(self.report.as_array().into_iter().flatten()) {
                    rows.push(vec![
                        cell(&p["point"]),
                        cell(&p["class"]["verdict"]),
                        cell(&r["hhat"]),
                        cell(&r["alpha"]),
                        cell(&r["hypothesis_ok"]),
                        cell(&r["inequality_star_ok"]),
                    ]);
                }
                (h(&["point", "verdict", "hhat", "alpha", "hypothesis_ok", "inequality_star_ok"]), rows)
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn or_dash(s: String) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s
    }
}

fn locals_cell(p: &Value) -> String {
    let parts: Vec<String> = p["locals"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|l| format!("{}:{}", cell(&l["place"]), cell(&l["log_arg"])))
        .collect();
    parts.join(";")
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn rational_json(q: &BigRational) -> Value {
    if q.is_integer() {
        int_json(q.numer())
    } else {
        json!(q.to_string())
    }
}

/// `{point, global_log_arg, height, locals: [{place, log_arg}], exact}`, plus the
/// bad places of `f` when a map is given.
pub(crate) fn height_entry(p: &RationalPoint, f: Option<&PolynomialMap>) -> Value {
    let d = height_decomposition(p);
    let locals: Vec<Value> = d
        .locals
        .iter()
        .map(|l| json!({"place": l.place.to_string(), "log_arg": rational_json(&l.log_argument)}))
        .collect();
    let mut v = json!({
        "point": p.to_string(),
        "global_log_arg": int_json(&d.global_log_argument),
        "height": d.value(),
        "locals": locals,
        "exact": d.is_exact(),
    });
    if let Some(f) = f {
        let places: Vec<String> = bad_places(f, p).places.iter().map(|pl| pl.to_string()).collect();
        v["bad_places"] = json!(places);
    }
    v
}

pub(crate) fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}
