//! Distribution statistics of Pareto fronts and the relative deviation of a
//! found front from a reference front, aggregated over repetitions.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// The statistics reported per objective, in report row order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Statistic {
    Count,
    Mean,
    Sd,
    Min,
    Q1,
    Q2,
    Q3,
    Max,
}

impl Statistic {
    pub const ALL: [Statistic; 8] = [
        Statistic::Count,
        Statistic::Mean,
        Statistic::Sd,
        Statistic::Min,
        Statistic::Q1,
        Statistic::Q2,
        Statistic::Q3,
        Statistic::Max,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Statistic::Count => "count",
            Statistic::Mean => "mean",
            Statistic::Sd => "SD",
            Statistic::Min => "min",
            Statistic::Q1 => "Q1",
            Statistic::Q2 => "Q2",
            Statistic::Q3 => "Q3",
            Statistic::Max => "max",
        }
    }
}

/// Descriptive statistics of one objective over a front.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `n - 1`), 0 for a single value.
    pub sd: f64,
    pub min: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub max: f64,
}

impl Summary {
    pub fn get(&self, stat: Statistic) -> f64 {
        match stat {
            Statistic::Count => self.count as f64,
            Statistic::Mean => self.mean,
            Statistic::Sd => self.sd,
            Statistic::Min => self.min,
            Statistic::Q1 => self.q1,
            Statistic::Q2 => self.q2,
            Statistic::Q3 => self.q3,
            Statistic::Max => self.max,
        }
    }
}

/// Quantile by linear interpolation between order statistics at `p * (n - 1)`.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    match sorted.get(lo + 1) {
        Some(&next) if frac > 0.0 => sorted[lo] + frac * (next - sorted[lo]),
        _ => sorted[lo],
    }
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::invalid("cannot summarize an empty front"));
    }
    // Work on sorted values so the result does not depend on input order.
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Summary {
        count: n,
        mean,
        sd,
        min: v[0],
        q1: quantile(&v, 0.25),
        q2: quantile(&v, 0.5),
        q3: quantile(&v, 0.75),
        max: v[n - 1],
    })
}

/// Per-objective statistics of a front.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontStats {
    pub objectives: Vec<Summary>,
}

pub fn front_stats<P: AsRef<[f64]>>(front: &[P]) -> Result<FrontStats> {
    let Some(first) = front.first() else {
        return Err(Error::invalid("cannot summarize an empty front"));
    };
    let m = first.as_ref().len();
    if front.iter().any(|p| p.as_ref().len() != m) {
        return Err(Error::invalid("front members have different objective counts"));
    }
    let objectives = (0..m)
        .map(|k| {
            let column: Vec<f64> = front.iter().map(|p| p.as_ref()[k]).collect();
            summarize(&column)
        })
        .collect::<Result<_>>()?;
    Ok(FrontStats { objectives })
}

/// Mean and SD across repetitions of `(found - base) / base`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Deviation {
    pub mean: f64,
    pub sd: f64,
}

/// Relative deviation of found-front statistics from base-front statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub objectives: Vec<String>,
    pub repetitions: usize,
    /// `cells[objective][statistic]`, in [`Statistic::ALL`] order. `None`
    /// where the base statistic is zero.
    pub cells: Vec<Vec<Option<Deviation>>>,
}

impl DeviationReport {
    pub fn get(&self, objective: usize, stat: Statistic) -> Option<Deviation> {
        let row = Statistic::ALL.iter().position(|&s| s == stat).expect("known statistic");
        self.cells[objective][row]
    }

    /// One row per statistic; per objective a mean and an SD column, in
    /// percent.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic");
        for o in &self.objectives {
            write!(out, ",{o}_deviation_mean_pct,{o}_deviation_sd_pct").unwrap();
        }
        out.push('\n');
        for (row, stat) in Statistic::ALL.iter().enumerate() {
            out.push_str(stat.label());
            for cells in &self.cells {
                match cells[row] {
                    Some(d) => write!(out, ",{},{}", 100.0 * d.mean, 100.0 * d.sd).unwrap(),
                    None => out.push_str(",n/a,n/a"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Aligned markdown table in percent with two decimals.
    pub fn to_markdown(&self) -> String {
        let mut header = vec!["Pareto set".to_string()];
        for o in &self.objectives {
            header.push(format!("{o} deviation mean"));
            header.push(format!("{o} deviation SD"));
        }
        let mut rows = vec![header];
        for (row, stat) in Statistic::ALL.iter().enumerate() {
            let mut line = vec![stat.label().to_string()];
            for cells in &self.cells {
                match cells[row] {
                    Some(d) => {
                        line.push(format!("{:.2}%", 100.0 * d.mean));
                        line.push(format!("{:.2}%", 100.0 * d.sd));
                    }
                    None => {
                        line.push("n/a".into());
                        line.push("n/a".into());
                    }
                }
            }
            rows.push(line);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let render = |r: &[String]| {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, &w))| if c == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                .collect();
            format!("| {} |\n", cells.join(" | "))
        };
        let mut out = format!(
            "Deviation from the reference front, mean and SD over {} repetition(s)\n\n",
            self.repetitions
        );
        out.push_str(&render(&rows[0]));
        let rule: Vec<String> = widths
            .iter()
            .enumerate()
            .map(|(c, &w)| if c == 0 { "-".repeat(w) } else { format!("{}:", "-".repeat(w - 1)) })
            .collect();
        out.push_str(&format!("| {} |\n", rule.join(" | ")));
        for r in &rows[1..] {
            out.push_str(&render(r));
        }
        out
    }
}

/// Compare each repetition's front with the base front, statistic by
/// statistic, as `(found - base) / base`.
pub fn deviation_report<P: AsRef<[f64]>, Q: AsRef<[f64]>>(
    objectives: &[String],
    found_fronts: &[Vec<P>],
    base_front: &[Q],
) -> Result<DeviationReport> {
    if found_fronts.is_empty() {
        return Err(Error::invalid("at least one repetition is required"));
    }
    let base = front_stats(base_front)?;
    if base.objectives.len() != objectives.len() {
        return Err(Error::invalid(format!(
            "base front has {} objectives, expected {}",
            base.objectives.len(),
            objectives.len()
        )));
    }
    let found: Vec<FrontStats> = found_fronts
        .iter()
        .map(|f| front_stats(f))
        .collect::<Result<_>>()?;
    if found.iter().any(|f| f.objectives.len() != objectives.len()) {
        return Err(Error::invalid("found fronts and base front disagree on objective count"));
    }
    let reps = found.len();
    let cells = (0..objectives.len())
        .map(|k| {
            Statistic::ALL
                .iter()
                .map(|&stat| {
                    let b = base.objectives[k].get(stat);
                    if b == 0.0 {
                        return None;
                    }
                    let devs: Vec<f64> = found
                        .iter()
                        .map(|f| (f.objectives[k].get(stat) - b) / b)
                        .collect();
                    let mean = devs.iter().sum::<f64>() / reps as f64;
                    let sd = if reps > 1 {
                        (devs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (reps - 1) as f64).sqrt()
                    } else {
                        0.0
                    };
                    Some(Deviation { mean, sd })
                })
                .collect()
        })
        .collect();
    Ok(DeviationReport {
        objectives: objectives.to_vec(),
        repetitions: reps,
        cells,
    })
}
