use mrf_ptas::mrf::{ModelFile, MrfInstance};
use mrf_ptas::ptas::PtasConfig;
use mrf_ptas::sweep::{consecutive_ratios, prefix_best, run_sweep, sweep_to_csv};
use mrf_ptas::vision::{build_stereo_instance, standard_scene, Image, StereoParams};

use crate::failure::{read_bytes, read_text, usage, write_atomic, CmdResult, Stage};
use crate::SweepArgs;

fn parse_dims(text: &str) -> CmdResult<(usize, usize)> {
    let parsed = text.split_once('x').and_then(|(w, h)| Some((w.parse().ok()?, h.parse().ok()?)));
    match parsed {
        Some((w, h)) if w > 0 && h > 0 => Ok((w, h)),
        _ => Err(usage(format!("expected WIDTHxHEIGHT, got {text:?}"))),
    }
}

fn load(args: &SweepArgs) -> CmdResult<MrfInstance> {
    if let Some(path) = &args.model {
        return ModelFile::parse(&read_text(path)?).stage("parsing the model");
    }
    let labels = args.labels.unwrap_or(0);
    let (left, right) = if let Some(dims) = &args.scene {
        let (w, h) = parse_dims(dims)?;
        let scene = standard_scene(w, h, labels, args.seed).stage("generating the scene")?;
        (scene.left, scene.right)
    } else if let (Some(l), Some(r)) = (&args.left, &args.right) {
        let left = Image::parse_ppm(&read_bytes(l)?).stage(format!("parsing {}", l.display()))?;
        let right = Image::parse_ppm(&read_bytes(r)?).stage(format!("parsing {}", r.display()))?;
        (left, right)
    } else {
        return Err(usage("give --model, --left/--right/--labels, or --scene/--labels"));
    };
    build_stereo_instance(&left, &right, &StereoParams::new(labels)).stage("building the stereo model")
}

pub fn run(args: SweepArgs) -> CmdResult {
    if args.eps.len() < 2 {
        return Err(usage("--eps needs at least two values"));
    }
    let inst = load(&args)?;
    let base = PtasConfig::with_k(1).stage("configuring")?.workers(args.workers);
    let rows = run_sweep(&inst, &args.eps, &base).stage("sweep")?;
    let csv = sweep_to_csv(&rows);
    match &args.csv {
        Some(path) => write_atomic(path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    let best = prefix_best(&rows);
    for (r, b) in rows.iter().zip(&best) {
        println!("eps {:.4}  k {}  score {}  best-so-far {}  {:.1} ms  width {}", r.epsilon, r.k, r.score, b, r.wall_ms, r.max_width);
    }
    let l = inst.num_labels();
    for (w, (observed, predicted)) in rows.windows(2).zip(consecutive_ratios(&rows, l)) {
        println!(
            "ratio eps {:.4} -> {:.4}: observed {observed:.2}, predicted (1/eps)*L^(1/eps) {predicted:.2}",
            w[0].epsilon, w[1].epsilon
        );
    }
    Ok(())
}
