use arm_core::aggregate_sweep_cell;
use statrs::statistics::{Data, Distribution, OrderStatistics};

#[test]
fn matches_reference_statistics() {
    let xs = [0.21, 0.002, 0.25, 0.24, 0.19, 0.003, 0.248, 0.23, 0.11, 0.245, 0.9];
    let s = aggregate_sweep_cell(&xs).unwrap();
    let data = Data::new(xs.to_vec());
    let n = xs.len() as f64;
    assert!((s.mean - data.mean().unwrap()).abs() < 1e-15);
    // statrs reports the sample sd; convert to the population sd
    let pop_sd = data.std_dev().unwrap() * ((n - 1.0) / n).sqrt();
    assert!((s.sd - pop_sd).abs() < 1e-15);

    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    // type 7: h = (n - 1) q
    let q = |p: f64| {
        let h = (n - 1.0) * p;
        let lo = h.floor() as usize;
        sorted[lo] + (h - lo as f64) * (sorted[(lo + 1).min(sorted.len() - 1)] - sorted[lo])
    };
    assert!((s.q1 - q(0.25)).abs() < 1e-15);
    assert!((s.median - Data::new(xs.to_vec()).median()).abs() < 1e-15);
    assert!((s.q3 - q(0.75)).abs() < 1e-15);

    let iqr = s.q3 - s.q1;
    assert!((s.lower_fence - (s.q1 - 1.5 * iqr)).abs() < 1e-15);
    assert!((s.upper_fence - (s.q3 + 1.5 * iqr)).abs() < 1e-15);
    assert_eq!(s.whisker_high, 0.25);
    assert!(s.whisker_low >= s.lower_fence);
}

#[test]
fn single_value_cell() {
    let s = aggregate_sweep_cell(&[0.12]).unwrap();
    assert_eq!((s.mean, s.sd, s.q1, s.median, s.q3), (0.12, 0.0, 0.12, 0.12, 0.12));
    assert!(aggregate_sweep_cell(&[]).is_err());
}
