use svrmm::data::scale_max_norm;
use svrmm::problems::BinaryNonconvexProblem;
use svrmm::solver::{run, SolverConfig};
use svrmm::surrogates::ExponentialPenaltyL1;
use svrmm::synth::synthetic_binary;
use svrmm::theory::Method;

fn main() {
    let n = 2000usize;
    let d = 50usize;
    for noise in [0.1f64, 0.25, 0.5, 1.0] {
        let (data, _) = scale_max_norm(&synthetic_binary(n, d, noise, 55));
        let p = BinaryNonconvexProblem::new(data).unwrap();
        let reg = ExponentialPenaltyL1::new(1.0 / n as f64, 5.0).unwrap();
        let mut finals = vec![];
        let mut ratios = vec![];
        for method in [Method::Saga, Method::Svrg, Method::Sarah] {
            let config = SolverConfig::new(method, 20, 4);
            let trace = run(&p, &reg, &config, None).unwrap();
            let first = trace.rows.iter().find_map(|r| r.step_sq_mean).unwrap();
            let last = trace.rows.last().unwrap().step_sq_mean.unwrap();
            finals.push(trace.rows.last().unwrap().objective);
            ratios.push(last / first);
        }
        let fstar = finals.iter().cloned().fold(f64::INFINITY, f64::min);
        let worst_res = finals.iter().map(|f| (f - fstar) / fstar.abs()).fold(0.0f64, f64::max);
        println!(
            "noise={:.2} worst_res={:.2e} step_ratios=[{:.1e} {:.1e} {:.1e}] F*={:.5}",
            noise, worst_res, ratios[0], ratios[1], ratios[2], fstar
        );
    }
}
