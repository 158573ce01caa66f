//! Recomputes recall, precision and F1 from percentage masses, the way a
//! published results table reports them.

use remod::eval::{metrics, parse_mass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = [
        ("entities", "96", "4", "0"),
        ("attributes", "80", "11.4", "8.6"),
        ("operations", "85.7", "8.6", "5.7"),
    ];
    println!("{:<12}{:>6}{:>6}{:>6}", "kind", "RCL", "PRC", "F1");
    for (kind, tp, fp, fn_) in rows {
        let m = metrics(parse_mass(tp)?, parse_mass(fp)?, parse_mass(fn_)?)?;
        let r = m.rounded();
        println!("{kind:<12}{:>6}{:>6}{:>6}", r.rcl, r.prc, r.f1);
    }
    Ok(())
}
