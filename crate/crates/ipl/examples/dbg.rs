use ipl::estimation::{fit_mle, loglik, score, profile_theta, FitOptions, Sample};
use ipl::model::IplParams;
use ipl::sampling::{sample_inverse_transform, RngStream};

fn main() {
    let truth = IplParams::new(1.0, 2.0).unwrap();
    let s = sample_inverse_transform(&truth, &mut RngStream::new(42, 0), 500).unwrap();
    let fit = fit_mle(&s, &FitOptions::default()).unwrap();
    println!("fit: theta={} alpha={} ll={} grad={} iters={} conv={}",
        fit.params.theta(), fit.params.alpha(), fit.loglik, fit.grad_norm, fit.iterations, fit.converged);
    println!("init: theta={} alpha={}", fit.init.theta(), fit.init.alpha());
    let (g0, g1) = score(&fit.init, &s);
    println!("score at init: ({g0}, {g1})  ll at init: {}", loglik(&fit.init, &s));
    // scan profile around init alpha
    for da in [-0.01f64, -0.001, 0.0, 0.001, 0.01] {
        let a = fit.init.alpha() + da;
        let t = profile_theta(a, &s).unwrap();
        let p = IplParams::new(t, a).unwrap();
        let (h0, h1) = score(&p, &s);
        println!("alpha {a:.5}: theta_hat {t:.8} pll {:.10} score=({h0:.3e},{h1:.3e})", loglik(&p, &s));
    }
}
