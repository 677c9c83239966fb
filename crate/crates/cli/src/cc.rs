use mrf_ptas::ptas::solve_ptas;
use mrf_ptas::reductions::{cc_brute_force, cc_to_mrf, cc_value, labels_to_clustering, CcFile, Clustering};
use serde::Serialize;

use crate::failure::{internal, read_text, write_json, CmdResult, Stage};
use crate::solve::ptas_config;
use crate::CcArgs;

#[derive(Serialize)]
struct Output<'a> {
    #[serde(flatten)]
    clustering: &'a Clustering,
    value: f64,
}

pub fn run(args: CcArgs) -> CmdResult {
    let cc = CcFile::parse(&read_text(&args.input)?).stage("parsing the clustering instance")?;
    let mrf = cc_to_mrf(&cc).stage("reducing to an MRF")?;
    let sol = solve_ptas(&mrf, &ptas_config(&args.opts)?).stage("PTAS solve")?;
    let clustering = labels_to_clustering(&cc.graph, &sol.assignment);
    let value = cc_value(&cc, &clustering);
    write_json(&args.out, &Output { clustering: &clustering, value })?;

    let clusters = clustering.clusters.iter().max().map_or(0, |m| m + 1);
    println!("value {value}");
    println!("clusters {clusters}");
    if args.verify {
        let (_, best) = cc_brute_force(&cc).stage("exhaustive verification")?;
        let required = (1.0 - args.opts.epsilon) * best;
        let ok = value >= required - 1e-9;
        println!("optimum {best} (required {required}): {}", if ok { "ok" } else { "FAILED" });
        if !ok {
            return Err(internal("clustering misses the verified bound"));
        }
    }
    Ok(())
}
