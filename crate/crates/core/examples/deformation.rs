//! Sliding the circle changes the shape of its orthant image, not just its
//! position.
use momentlab::sampler::{deformation_scan, CurveSpec};

fn main() -> momentlab::Result<()> {
    let family: Vec<CurveSpec> = [1.0, 1.15, 1.3]
        .iter()
        .map(|&c| CurveSpec::Circle {
            center: [c, 1.0],
            radius: 1.2,
        })
        .collect();
    let scan = deformation_scan(&family, 4000, 7)?;
    for v in &scan.verdicts {
        println!(
            "({}, {}): Hausdorff after shift {:.4}, translates {}",
            v.first, v.second, v.hausdorff, v.equivalent
        );
    }
    println!("nontrivial: {}", scan.nontrivial);
    Ok(())
}
