use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let rep = petersson_diffop::run_suite(20, 2024, true);
    for r in &rep.identities {
        println!("{:24} {:3} {:.3e} {}", r.name, r.points, r.max_rel_err, r.passed);
    }
    println!("{:?}", t0.elapsed());
}
