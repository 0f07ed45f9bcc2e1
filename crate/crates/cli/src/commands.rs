//! One function per subcommand.

use std::io::{self, BufWriter};
use std::path::Path;
use std::time::Duration;

use memsys_evo::baseline::{enumerate_candidates, exhaustive_front};
use memsys_evo::catalog::{generate_synthetic_system, load_catalog, load_system, two_memory_toy, Catalog, SystemSpec};
use memsys_evo::engine::{run_optimization, DeConfig};
use memsys_evo::estimator::{serve, Backend, ExecBackend, SurrogateBackend};
use memsys_evo::metrics::{deviation_report, front_stats};
use memsys_evo::report::{history_csv, FrontFile};
use memsys_evo::{Error, Result};
use rayon::prelude::*;
use serde_json::json;

use crate::output::{ensure_dir, write_atomic, RunManifest};
use crate::plot::{render_svg, Normalization, Series};
use crate::{CompareArgs, ExhaustiveArgs, GenerateArgs, Inputs, OptimizeArgs, PlotArgs, ServeArgs, SweepArgs};

fn load_inputs(inputs: &Inputs) -> Result<(Catalog, SystemSpec)> {
    let catalog = load_catalog(&inputs.catalog)?;
    let system = load_system(&inputs.system)?;
    catalog.check_system(&system)?;
    Ok((catalog, system))
}

fn open_backend(inputs: &Inputs) -> Result<Box<dyn Backend>> {
    match inputs.backend.as_str() {
        "surrogate" => Ok(Box::new(SurrogateBackend)),
        spec => match spec.strip_prefix("exec:") {
            Some(cmd) if !cmd.trim().is_empty() => {
                Ok(Box::new(ExecBackend::spawn(cmd, Duration::from_secs(inputs.timeout))?))
            }
            _ => Err(Error::InvalidInput(format!(
                "backend must be `surrogate` or `exec:COMMAND`, got `{spec}`"
            ))),
        },
    }
}

fn manifest_for(command: &str, inputs: &Inputs, out: &Path) -> RunManifest {
    let mut m = RunManifest::new(command, out);
    m.catalog = Some(inputs.catalog.clone());
    m.system = Some(inputs.system.clone());
    m.backend = Some(inputs.backend.clone());
    m
}

fn repetition_seeds(seed: u64, repeats: usize) -> Result<Vec<u64>> {
    if repeats == 0 {
        return Err(Error::InvalidInput("--repeats must be at least 1".into()));
    }
    (0..repeats as u64)
        .map(|k| {
            seed.checked_add(k)
                .ok_or_else(|| Error::InvalidInput(format!("seed {seed} + {k} overflows")))
        })
        .collect()
}

pub fn optimize(args: OptimizeArgs) -> Result<()> {
    let base = DeConfig {
        pop_size: args.pop,
        generations: args.gens,
        f: args.f,
        cr: args.cr,
        seed: args.seed,
    };
    base.validate()?;
    let seeds = repetition_seeds(args.seed, args.repeats)?;
    let (catalog, system) = load_inputs(&args.inputs)?;
    let backend = open_backend(&args.inputs)?;
    ensure_dir(&args.out)?;

    let mut manifest = manifest_for("optimize", &args.inputs, &args.out);
    manifest.settings = json!({ "de": base, "repeats": args.repeats, "seeds": seeds });
    for &seed in &seeds {
        let run = run_optimization(&catalog, &system, &DeConfig { seed, ..base }, backend.as_ref())?;
        let front = FrontFile::from_run(catalog.objectives(), &run);
        manifest.emit(&format!("front-{seed}.json"), &front.to_json())?;
        manifest.emit(&format!("front-{seed}.csv"), &front.to_csv())?;
        manifest.emit(&format!("history-{seed}.csv"), &history_csv(catalog.objectives(), &run.history))?;
        println!(
            "seed {seed}: {} front members ({} distinct), {} evaluations, {:.2} s",
            front.members.len(),
            front.deduplicated_count,
            run.evaluations_used,
            run.wall_time.as_secs_f64()
        );
    }
    manifest.finish()
}

pub fn exhaustive(args: ExhaustiveArgs) -> Result<()> {
    let (catalog, system) = load_inputs(&args.inputs)?;
    let backend = open_backend(&args.inputs)?;
    let table = enumerate_candidates(&catalog, &system, backend.as_ref(), args.candidate_cap)?;
    let front = exhaustive_front(&table, args.cap)?;
    ensure_dir(&args.out)?;

    let counts: Vec<usize> = table.memories.iter().map(Vec::len).collect();
    let mut manifest = manifest_for("exhaustive", &args.inputs, &args.out);
    manifest.settings = json!({
        "combo_cap": args.cap.to_string(),
        "candidate_cap": args.candidate_cap.to_string(),
        "candidates_per_memory": counts,
        "total_combinations": front.total_combinations.to_string(),
        "enumerated_combinations": front.enumerated_combinations.to_string(),
    });
    let file = FrontFile::from_exhaustive(catalog.objectives(), &table, &front);
    manifest.emit("front-exhaustive.json", &file.to_json())?;
    manifest.emit("front-exhaustive.csv", &file.to_csv())?;
    println!(
        "candidates per memory {counts:?}: {} combinations, {} after pruning, front of {} ({} distinct)",
        front.total_combinations,
        front.enumerated_combinations,
        file.members.len(),
        file.deduplicated_count
    );
    manifest.finish()
}

fn check_objectives(reference: &FrontFile, other: &FrontFile, path: &Path) -> Result<()> {
    if other.objectives != reference.objectives {
        return Err(Error::Validation {
            location: path.display().to_string(),
            message: format!(
                "objectives {:?} differ from {:?}",
                other.objectives, reference.objectives
            ),
        });
    }
    Ok(())
}

pub fn compare(args: CompareArgs) -> Result<()> {
    let base = FrontFile::read(&args.baseline)?;
    let mut found = Vec::with_capacity(args.found.len());
    for path in &args.found {
        let f = FrontFile::read(path)?;
        check_objectives(&base, &f, path)?;
        found.push(f.points());
    }
    let report = deviation_report(&base.objectives, &found, &base.points())?;
    let markdown = report.to_markdown();
    print!("{markdown}");
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        let mut manifest = RunManifest::new("compare", out);
        manifest.settings = json!({ "baseline": args.baseline, "found": args.found });
        manifest.emit("deviation.csv", &report.to_csv())?;
        manifest.emit("deviation.md", &markdown)?;
        manifest.finish()?;
    }
    Ok(())
}

fn parse_grid<T: std::str::FromStr>(flag: &str, raw: &str) -> Result<Vec<T>> {
    let values: Vec<&str> = raw.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if values.is_empty() {
        return Err(Error::InvalidInput(format!("grid for --{flag} is empty")));
    }
    values
        .into_iter()
        .map(|v| {
            v.parse()
                .map_err(|_| Error::InvalidInput(format!("cannot parse `{v}` in grid for --{flag}")))
        })
        .collect()
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let fs: Vec<f64> = parse_grid("f", &args.f)?;
    let crs: Vec<f64> = parse_grid("cr", &args.cr)?;
    let pops: Vec<usize> = parse_grid("pop", &args.pop)?;
    let gens: Vec<usize> = parse_grid("gens", &args.gens)?;
    let seeds = repetition_seeds(args.seed, args.repeats)?;
    let mut cells = Vec::new();
    for &f in &fs {
        for &cr in &crs {
            for &pop_size in &pops {
                for &generations in &gens {
                    let cfg = DeConfig { pop_size, generations, f, cr, seed: args.seed };
                    cfg.validate()?;
                    cells.push(cfg);
                }
            }
        }
    }
    let (catalog, system) = load_inputs(&args.inputs)?;
    let backend = open_backend(&args.inputs)?;
    ensure_dir(&args.out)?;
    let m = catalog.objectives().len();

    // Per cell: per objective (min, mean, max) of the found front, averaged
    // over repetitions.
    let rows: Vec<Vec<[f64; 3]>> = cells
        .par_iter()
        .map(|cfg| {
            let mut acc = vec![[0.0; 3]; m];
            for &seed in &seeds {
                let run = run_optimization(&catalog, &system, &DeConfig { seed, ..*cfg }, backend.as_ref())?;
                let points: Vec<_> = run.final_front.iter().map(|e| e.objectives.clone()).collect();
                let stats = front_stats(&points)?;
                for (a, s) in acc.iter_mut().zip(&stats.objectives) {
                    a[0] += s.min;
                    a[1] += s.mean;
                    a[2] += s.max;
                }
            }
            for a in &mut acc {
                for v in a.iter_mut() {
                    *v /= seeds.len() as f64;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut csv = String::from("f,cr,pop,gens,repeats");
    for o in catalog.objectives() {
        csv.push_str(&format!(",{o}_min,{o}_mean,{o}_max"));
    }
    csv.push('\n');
    for (cfg, row) in cells.iter().zip(&rows) {
        csv.push_str(&format!("{},{},{},{},{}", cfg.f, cfg.cr, cfg.pop_size, cfg.generations, seeds.len()));
        for [lo, mean, hi] in row {
            csv.push_str(&format!(",{lo},{mean},{hi}"));
        }
        csv.push('\n');
    }
    let mut manifest = manifest_for("sweep", &args.inputs, &args.out);
    manifest.settings = json!({ "f": fs, "cr": crs, "pop": pops, "gens": gens, "seeds": seeds });
    manifest.emit("sweep.csv", &csv)?;
    print!("{csv}");
    manifest.finish()
}

fn series_of(path: &Path, file: &FrontFile) -> Series {
    let label = path
        .file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Series {
        label,
        points: file.members.iter().map(|e| [e.objectives.0[0], e.objectives.0[1]]).collect(),
    }
}

pub fn plot(args: PlotArgs) -> Result<()> {
    let baseline = args.baseline.as_ref().map(|p| FrontFile::read(p).map(|f| (p, f))).transpose()?;
    let mut files = Vec::with_capacity(args.found.len());
    for path in &args.found {
        files.push((path, FrontFile::read(path)?));
    }
    let Some((ref_path, reference)) = baseline.as_ref().or(files.first()).map(|(p, f)| (p.as_path(), f)) else {
        return Err(Error::InvalidInput("plot needs at least one front file or --baseline".into()));
    };
    let m = reference.objectives.len();
    if m < 2 {
        return Err(Error::Validation {
            location: ref_path.display().to_string(),
            message: "plotting needs at least two objectives".into(),
        });
    }
    if m > 2 {
        eprintln!(
            "warning: fronts have {m} objectives; plotting `{}` and `{}` only",
            reference.objectives[0], reference.objectives[1]
        );
    }
    for (path, f) in &files {
        check_objectives(reference, f, path)?;
    }

    let base_series = baseline.as_ref().map(|(p, f)| series_of(p, f));
    let norm = base_series.as_ref().map(|s| Normalization::spanning(&s.points));
    let series: Vec<Series> = files.iter().map(|(p, f)| series_of(p, f)).collect();
    let axes = [reference.objectives[0].as_str(), reference.objectives[1].as_str()];
    let svg = render_svg(axes, base_series.as_ref(), &series, norm);
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    write_atomic(&args.out, &svg)
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    let (catalog, system) = if args.toy {
        two_memory_toy()
    } else {
        generate_synthetic_system(args.seed, args.memories, args.compilers, args.candidates)?
    };
    ensure_dir(&args.out)?;
    write_atomic(&args.out.join("catalog.json"), &pretty(&catalog))?;
    write_atomic(&args.out.join("system.json"), &pretty(&system))?;
    println!(
        "wrote {} compilers and {} memories to {}",
        catalog.compilers().len(),
        system.len(),
        args.out.display()
    );
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub fn estimator_serve(args: ServeArgs) -> Result<()> {
    let catalog = load_catalog(&args.catalog)?;
    let stdin = io::stdin().lock();
    let stdout = BufWriter::new(io::stdout().lock());
    serve(&catalog, stdin, stdout)
}
