//! Seeded workloads, run reports and scaling fits shared by the criterion
//! benches, the `mdl bench` command and the acceptance suite.

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::{Duration, Instant};

use mdl_core::formula::Operator;
use mdl_core::fragments::{check_flat, check_topdown, dispatch_check, FragmentError};
use mdl_core::random::{random_formula, random_structure, random_team, seeded, FormulaSpec};
use mdl_core::{Formula, KripkeStructure, Team};
use serde::Serialize;

/// Operator families the workload generator draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    /// Every operator, unbounded arity.
    Full,
    /// Box, conjunction, classical disjunction and dependence atoms.
    Topdown,
    /// Plain modal logic.
    Flat,
    /// Split disjunctions of dependence atoms.
    Vee,
    /// Modalities and classical disjunction over bounded-arity atoms.
    Nor,
}

impl Fragment {
    pub const ALL: [Fragment; 5] = [
        Fragment::Full,
        Fragment::Topdown,
        Fragment::Flat,
        Fragment::Vee,
        Fragment::Nor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fragment::Full => "full",
            Fragment::Topdown => "topdown",
            Fragment::Flat => "flat",
            Fragment::Vee => "vee",
            Fragment::Nor => "nor",
        }
    }

    pub fn spec(self) -> FormulaSpec {
        use Operator::*;
        let props = ["p", "q", "r"];
        match self {
            Fragment::Full => FormulaSpec::new(&props, &Operator::ALL, 2),
            Fragment::Topdown => FormulaSpec::new(&props, &[Box, And, ClassicalOr, Neg, Dep], 2),
            Fragment::Flat => FormulaSpec::new(&props, &[Box, Diamond, And, SplitOr, Neg], 0),
            Fragment::Vee => FormulaSpec::new(&props, &[SplitOr, Neg, Dep], 1),
            Fragment::Nor => FormulaSpec::new(&props, &[Box, Diamond, ClassicalOr, Neg, Dep], 1),
        }
    }

    /// Arity bound handed to the dispatcher.
    pub fn arity_bound(self) -> Option<usize> {
        match self {
            Fragment::Full | Fragment::Topdown => None,
            _ => Some(self.spec().max_arity),
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fragment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fragment::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown fragment {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub structure: KripkeStructure,
    pub team: Team,
    pub formula: Formula,
}

/// Average out-degree of generated structures.
pub const MEAN_DEGREE: f64 = 2.0;

/// A random structure of `worlds` worlds, a random team and a formula of
/// `formula_size` nodes in `fragment`, all determined by `seed`.
pub fn instance(fragment: Fragment, seed: u64, worlds: usize, formula_size: usize) -> Instance {
    let mut rng = seeded(seed);
    let spec = fragment.spec();
    let props: Vec<&str> = spec.props.iter().map(String::as_str).collect();
    let edge_prob = (MEAN_DEGREE / worlds as f64).min(1.0);
    let structure = random_structure(&mut rng, worlds, &props, edge_prob);
    let team = random_team(&mut rng, &structure);
    let formula = random_formula(&mut rng, &spec, formula_size);
    Instance {
        seed,
        structure,
        team,
        formula,
    }
}

/// One line of the benchmark CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    #[serde(rename = "|S|")]
    pub worlds: usize,
    #[serde(rename = "|φ|")]
    pub formula_size: usize,
    pub fragment: String,
    pub algorithm: String,
    pub verdict: bool,
    pub nodes: u128,
    pub micros: u128,
}

/// Runs the dispatcher on an instance and records what it did.
pub fn run(fragment: Fragment, inst: &Instance) -> Result<RunReport, FragmentError> {
    let start = Instant::now();
    let out = dispatch_check(
        &inst.structure,
        &inst.team,
        &inst.formula,
        fragment.arity_bound(),
    )?;
    let micros = start.elapsed().as_micros();
    Ok(RunReport {
        seed: inst.seed,
        worlds: inst.structure.num_worlds(),
        formula_size: inst.formula.size(),
        fragment: fragment.name().to_string(),
        algorithm: out.used.to_string(),
        verdict: out.holds,
        nodes: out.work.unwrap_or(0),
        micros,
    })
}

pub fn write_csv<W: io::Write>(out: W, reports: &[RunReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

/// The polynomial algorithms whose running time the scaling fit measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polynomial {
    Topdown,
    Flat,
}

impl Polynomial {
    pub fn fragment(self) -> Fragment {
        match self {
            Polynomial::Topdown => Fragment::Topdown,
            Polynomial::Flat => Fragment::Flat,
        }
    }

    pub fn check(self, inst: &Instance) -> bool {
        let run = match self {
            Polynomial::Topdown => check_topdown,
            Polynomial::Flat => check_flat,
        };
        run(&inst.structure, &inst.team, &inst.formula).expect("instance drawn from the fragment")
    }
}

/// One point of a scaling series: `|S|·|φ|` and the mean time per check.
#[derive(Clone, Copy, Debug)]
pub struct ScalingPoint {
    pub worlds: usize,
    pub product: usize,
    pub mean: Duration,
}

/// Times `algo` on `instances` seeded instances per size, repeating each
/// batch until it has run for at least `min_time`.
pub fn scaling_series(
    algo: Polynomial,
    sizes: &[usize],
    formula_size: usize,
    instances: u64,
    min_time: Duration,
) -> Vec<ScalingPoint> {
    sizes
        .iter()
        .map(|&n| {
            let batch: Vec<Instance> = (0..instances)
                .map(|seed| instance(algo.fragment(), seed, n, formula_size))
                .collect();
            let product = n * batch.iter().map(|i| i.formula.size()).sum::<usize>() / batch.len();
            let start = Instant::now();
            let mut runs = 0u32;
            while runs == 0 || start.elapsed() < min_time {
                for inst in &batch {
                    std::hint::black_box(algo.check(std::hint::black_box(inst)));
                }
                runs += 1;
            }
            ScalingPoint {
                worlds: n,
                product,
                mean: start.elapsed() / (runs * batch.len() as u32),
            }
        })
        .collect()
}

pub fn scaling_slope(series: &[ScalingPoint]) -> f64 {
    let points: Vec<(f64, f64)> = series
        .iter()
        .map(|p| (p.product as f64, p.mean.as_secs_f64()))
        .collect();
    loglog_slope(&points)
}
