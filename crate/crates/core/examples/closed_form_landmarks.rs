// Landmark QFI values and the determinant ratio across squeezing strengths.

use cv_metrology::closed_forms::{det_ratio, landmarks, q22_closed, ClosedFormInputs};

pub fn run_example() -> cv_metrology::Result<()> {
    let l = landmarks(0.5, 0.5, 0.0)?;
    println!(
        "Q22 max {:.5}  opt {:.5}  inf {:.5}",
        l.q22_max, l.q22_opt, l.q22_inf
    );
    println!(
        "ratios opt/max {:.5}  inf/opt {:.5}",
        l.ratio_opt_max, l.ratio_inf_opt
    );
    println!(
        "closed-form Q22 at the maximum configuration {:.5}",
        q22_closed(&ClosedFormInputs::maximum(0.5, 0.5))
    );

    println!("  r     det ratio (x = 0.5)");
    for k in 0..=8 {
        let r = 0.25 * k as f64;
        match det_ratio(r, 0.5)?.ratio {
            Some(v) => println!("{r:5.2}  {v:.6}"),
            None => println!("{r:5.2}  undefined"),
        }
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
