use tl_loop::link::BoundaryCondition::Closed;
use tl_loop::spectra::scaled_gap_estimate;

#[test]
fn calibrate_gaps() {
    let t = std::time::Instant::now();
    let est = scaled_gap_estimate(Closed, 2, &[8, 10, 12, 14, 16]).unwrap();
    println!(
        "s=1  delta={:.6} (target 1/3={:.6})  residual={:.2e}  gaps={:?}  [{:?}]",
        est.delta, 1.0 / 3.0, est.residual, est.scaled_gaps, t.elapsed()
    );
    let t = std::time::Instant::now();
    let est = scaled_gap_estimate(Closed, 3, &[7, 9, 11, 13, 15]).unwrap();
    println!(
        "s=3/2 delta={:.6} (target 1)  residual={:.2e}  gaps={:?}  [{:?}]",
        est.delta, est.residual, est.scaled_gaps, t.elapsed()
    );
    let t = std::time::Instant::now();
    let est = scaled_gap_estimate(Closed, 1, &[7, 9, 11, 13, 15]).unwrap();
    println!(
        "s=1/2 delta={:.6} (target 0)  residual={:.2e}  [{:?}]",
        est.delta, est.residual, t.elapsed()
    );
}
