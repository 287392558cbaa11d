//! Run configuration: flag values merged over an optional JSON file, then
//! expanded into one job per point of the parameter sweep.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{Map, Value};

use qdrh_core::{Framing, TruncationParams};

use crate::Experiment;

/// Parameters as read from the command line or a config file. List-valued
/// entries hold the sweep.
#[derive(Clone, Debug, Default)]
pub struct RawConfig {
    pub p: Option<Vec<i64>>,
    pub m: Option<Vec<i64>>,
    pub n: Option<Vec<i64>>,
    pub d: Option<Vec<i64>>,
    pub b: Option<Vec<i64>>,
    pub w: Option<Vec<i64>>,
    pub a: Option<Vec<i64>>,
    pub dim: Option<Vec<i64>>,
    pub framing: Option<Vec<Value>>,
    pub samples: Option<i64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub domain: Option<String>,
}

/// Parses `3`, `"2,3,5"` or `[2, 3, 5]`.
pub fn parse_list(v: &Value) -> Result<Vec<i64>, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| vec![x])
            .ok_or_else(|| format!("not an integer: {n}")),
        Value::String(s) => parse_list_str(s),
        Value::Array(a) => a
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| format!("not an integer: {x}")))
            .collect(),
        other => Err(format!("expected an integer list, found {other}")),
    }
}

pub fn parse_list_str(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad integer {x:?}: {e}"))
        })
        .collect()
}

fn single(v: Option<Vec<i64>>, name: &str) -> Result<Option<i64>, String> {
    match v.as_deref() {
        None => Ok(None),
        Some([x]) => Ok(Some(*x)),
        Some(_) => Err(format!("--{name} takes a single value")),
    }
}

impl RawConfig {
    pub fn from_json(v: &Value) -> Result<Self, String> {
        let obj = v.as_object().ok_or("config file must hold a JSON object")?;
        let list = |k: &str| obj.get(k).map(parse_list).transpose();
        let framing = match obj.get("framing") {
            None => None,
            Some(Value::Array(a)) if a.iter().all(Value::is_object) => Some(a.clone()),
            Some(f @ Value::Object(_)) => Some(vec![f.clone()]),
            Some(other) => {
                return Err(format!(
                    "framing must be an object or a list of objects, found {other}"
                ))
            }
        };
        for k in obj.keys() {
            if ![
                "p", "M", "N", "D", "B", "W", "a", "d", "framing", "samples", "seed", "out",
                "jobs", "domain",
            ]
            .contains(&k.as_str())
            {
                return Err(format!("unknown config key {k:?}"));
            }
        }
        Ok(RawConfig {
            p: list("p")?,
            m: list("M")?,
            n: list("N")?,
            d: list("D")?,
            b: list("B")?,
            w: list("W")?,
            a: list("a")?,
            dim: list("d")?,
            framing,
            samples: single(list("samples")?, "samples")?,
            seed: obj
                .get("seed")
                .map(|x| x.as_u64().ok_or("seed must be a non-negative integer"))
                .transpose()?,
            out: obj.get("out").and_then(Value::as_str).map(PathBuf::from),
            jobs: obj.get("jobs").and_then(Value::as_u64).map(|x| x as usize),
            domain: obj.get("domain").and_then(Value::as_str).map(String::from),
        })
    }

    /// `self` with every value set in `over` replaced.
    pub fn overridden_by(self, over: RawConfig) -> RawConfig {
        RawConfig {
            p: over.p.or(self.p),
            m: over.m.or(self.m),
            n: over.n.or(self.n),
            d: over.d.or(self.d),
            b: over.b.or(self.b),
            w: over.w.or(self.w),
            a: over.a.or(self.a),
            dim: over.dim.or(self.dim),
            framing: over.framing.or(self.framing),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            jobs: over.jobs.or(self.jobs),
            domain: over.domain.or(self.domain),
        }
    }
}

/// One fully resolved experiment run.
#[derive(Clone, Debug, Serialize)]
pub struct Job {
    pub experiment: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "B")]
    pub b: i64,
    #[serde(rename = "W")]
    pub w: i64,
    pub a: Vec<i64>,
    #[serde(rename = "d")]
    pub dim: usize,
    pub framings: Vec<Framing>,
    pub samples: usize,
    pub seed: u64,
}

impl Job {
    pub fn params(&self) -> Result<TruncationParams, String> {
        let p = self.p.ok_or("missing --p")?;
        let m = self.m.ok_or("missing --M")?;
        TruncationParams::new(p, m, self.n, self.d, self.b).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// File name used when a sweep writes into a directory.
    pub fn file_name(&self) -> String {
        let mut s = self.experiment.clone();
        if let Some(p) = self.p {
            s += &format!("-p{p}");
        }
        if let Some(m) = self.m {
            s += &format!("-M{m}");
        }
        s += &format!(
            "-N{}-D{}-B{}-W{}-d{}",
            self.n, self.d, self.b, self.w, self.dim
        );
        if !self.a.is_empty() {
            s += &format!(
                "-a{}",
                self.a
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join("_")
            );
        }
        s + ".json"
    }
}

fn to_u64(x: i64, name: &str) -> Result<u64, String> {
    u64::try_from(x).map_err(|_| format!("--{name} must be non-negative, got {x}"))
}

/// The default `a` values for `p`: `2` and `3` when coprime to `p`.
fn default_a(p: u64) -> Vec<i64> {
    [2i64, 3]
        .into_iter()
        .filter(|a| !p.is_multiple_of(*a as u64))
        .collect()
}

fn parse_framings(raw: &Option<Vec<Value>>, default: Vec<Framing>) -> Result<Vec<Framing>, String> {
    match raw {
        None => Ok(default),
        Some(v) => v
            .iter()
            .map(|f| Framing::from_json(f).map_err(|e| e.to_string()))
            .collect(),
    }
}

/// Expands a configuration into jobs, in lexicographic sweep order.
pub fn expand(exp: Experiment, raw: &RawConfig) -> Result<Vec<Job>, String> {
    let needs_p = !matches!(exp, Experiment::Taylor);
    if needs_p && raw.p.is_none() {
        return Err("missing --p".into());
    }
    let ps: Vec<Option<u64>> = match &raw.p {
        Some(v) => v
            .iter()
            .map(|&x| to_u64(x, "p").map(Some))
            .collect::<Result<_, _>>()?,
        None => vec![None],
    };
    let ms: Vec<Option<u32>> = match &raw.m {
        Some(v) => v
            .iter()
            .map(|&x| {
                u32::try_from(x)
                    .map(Some)
                    .map_err(|_| format!("bad --M {x}"))
            })
            .collect::<Result<_, _>>()?,
        None if needs_p => vec![Some(1)],
        None => vec![None],
    };
    let ns = raw.n.clone().unwrap_or_else(|| {
        vec![if matches!(exp, Experiment::Taylor) {
            8
        } else {
            3
        }]
    });
    let ds = raw.d.clone().unwrap_or_else(|| vec![6]);
    let dims = raw.dim.clone().unwrap_or_else(|| vec![1]);
    let samples = raw.samples.unwrap_or(match exp {
        Experiment::Qconn => 500,
        _ => 100,
    });
    let samples =
        usize::try_from(samples).map_err(|_| "--samples must be non-negative".to_string())?;
    let seed = raw.seed.unwrap_or(0);
    let mut jobs = Vec::new();
    for &p in &ps {
        let ws: Vec<i64> = match (&raw.w, exp, p) {
            (Some(w), _, _) => w.clone(),
            (None, Experiment::Cartier | Experiment::CartierBoundary, Some(p)) => {
                vec![3 * p as i64]
            }
            (None, Experiment::GmH1, _) => vec![8],
            (None, _, _) => vec![2],
        };
        let a_sets: Vec<Vec<i64>> = match (exp, &raw.a) {
            (Experiment::Qconn, Some(a)) => a.iter().map(|&x| vec![x]).collect(),
            (Experiment::Qconn, None) => {
                vec![default_a(p.unwrap_or(2)).into_iter().take(1).collect()]
            }
            (Experiment::P1, Some(a)) => vec![a.clone()],
            (Experiment::P1, None) => vec![default_a(p.unwrap_or(2))],
            _ => vec![Vec::new()],
        };
        for &m in &ms {
            for &n in &ns {
                for &d in &ds {
                    let bs = raw
                        .b
                        .clone()
                        .unwrap_or_else(|| vec![if d > 2 { 2 } else { 1 }]);
                    for &b in &bs {
                        for &w in &ws {
                            for &dim in &dims {
                                for a in &a_sets {
                                    let dim = usize::try_from(dim)
                                        .map_err(|_| format!("bad --d {dim}"))?;
                                    let framings = match exp {
                                        Experiment::CompareFramings
                                        | Experiment::ChainmapSearch => parse_framings(
                                            &raw.framing,
                                            vec![Framing::polynomial(1), Framing::shifted(&[1])],
                                        )?,
                                        Experiment::Taylor => parse_framings(
                                            &raw.framing,
                                            vec![Framing::polynomial(1)],
                                        )?,
                                        _ => Vec::new(),
                                    };
                                    if matches!(
                                        exp,
                                        Experiment::CompareFramings | Experiment::ChainmapSearch
                                    ) && framings.len() != 2
                                    {
                                        return Err("compare-framings and chainmap-search need exactly two --framing values".into());
                                    }
                                    jobs.push(Job {
                                        experiment: exp.name().into(),
                                        p,
                                        m,
                                        n: usize::try_from(n)
                                            .map_err(|_| format!("bad --N {n}"))?,
                                        d,
                                        b,
                                        w,
                                        a: a.clone(),
                                        dim,
                                        framings,
                                        samples,
                                        seed,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(jobs)
}

/// Inserts the resolved configuration into a report object.
pub fn embed_config(report: Value, job: &Job) -> Value {
    let mut obj = match report {
        Value::Object(o) => o,
        other => {
            let mut o = Map::new();
            o.insert("report".into(), other);
            o
        }
    };
    obj.insert("config".into(), job.to_json());
    Value::Object(obj)
}
