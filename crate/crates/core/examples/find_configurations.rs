// Recovers the maximum and optimal configurations by grid search and refinement.

use cv_metrology::optimizer::find_known_configurations;

pub fn run_example() -> cv_metrology::Result<()> {
    let found = find_known_configurations(0.5, 0.5, 0.0)?;
    for opt in [&found.maximum, &found.optimal] {
        let coords: Vec<String> = opt
            .axes
            .iter()
            .zip(&opt.point)
            .map(|(a, v)| format!("{}={v:.6}", a.name()))
            .collect();
        println!(
            "{:<8} {}  value {:.8}  flat along {:?}",
            opt.label.as_deref().unwrap_or("-"),
            coords.join(" "),
            opt.value,
            opt.degenerate_axes
        );
    }
    println!("landmark Q22 max {:.8}", found.landmarks.q22_max);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
