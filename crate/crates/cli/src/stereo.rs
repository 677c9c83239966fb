use mrf_ptas::vision::{
    mislabel_rate, run_stereo, DisparityMap, GrayImage, Image, PairwiseModel, StereoParams,
};

use crate::failure::{read_bytes, usage, write_atomic, CmdResult, Stage};
use crate::solve::ptas_config;
use crate::{Pairwise, StereoArgs};

pub fn parse_beta(text: &str) -> CmdResult<Option<f64>> {
    if text == "auto" {
        return Ok(None);
    }
    match text.parse::<f64>() {
        Ok(b) if b.is_finite() => Ok(Some(b)),
        _ => Err(usage(format!("--beta expects a number or `auto`, got {text:?}"))),
    }
}

pub fn run(args: StereoArgs) -> CmdResult {
    let left = Image::parse_ppm(&read_bytes(&args.left)?).stage(format!("parsing {}", args.left.display()))?;
    let right = Image::parse_ppm(&read_bytes(&args.right)?).stage(format!("parsing {}", args.right.display()))?;
    let params = StereoParams {
        num_labels: args.labels,
        beta: parse_beta(&args.beta)?,
        two_pass: args.two_pass,
        smooth_radius: args.smooth,
        pairwise: match args.pairwise {
            Pairwise::AsPublished => PairwiseModel::AsPublished,
            Pairwise::Agreement => PairwiseModel::Agreement,
        },
        smoothness: args.smoothness,
    };
    let cfg = ptas_config(&args.opts)?;
    let out = run_stereo(&left, &right, &params, &cfg).stage("stereo pipeline")?;
    write_atomic(&args.out, &out.disparity.to_gray().to_pgm())?;

    println!("score {}", out.score);
    println!("width {}", out.passes.iter().map(|p| p.max_width()).max().unwrap_or(0));
    if let Some(path) = &args.truth {
        let gray = GrayImage::parse_pgm(&read_bytes(path)?).stage(format!("parsing {}", path.display()))?;
        let truth = DisparityMap::from_gray(&gray, args.labels).stage("reading ground truth")?;
        let rate = mislabel_rate(&out.disparity, &truth, args.tolerance).stage("comparing with ground truth")?;
        println!("mislabel_rate {rate:.6}");
    }
    Ok(())
}
