use std::time::Instant;

#[test]
#[ignore]
fn time_identity_suite_sizes() {
    let t0 = Instant::now();
    let r = krf_core::suite::identity_suite(1, 64, 1, 0.05).unwrap();
    println!("n=1 N=64: {:?}, {} reports, all pass: {}", t0.elapsed(), r.len(), r.iter().all(|x| x.pass));
    for rep in &r { println!("  {}: {:e} vs {:e}", rep.name, rep.residual, rep.tolerance); }
    let t0 = Instant::now();
    let r = krf_core::suite::identity_suite(2, 32, 1, 0.05).unwrap();
    println!("n=2 N=32: {:?}, all pass: {}", t0.elapsed(), r.iter().all(|x| x.pass));
    for rep in &r { println!("  {}: {:e} vs {:e}", rep.name, rep.residual, rep.tolerance); }
}
