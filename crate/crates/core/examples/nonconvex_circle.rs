//! A curved slice: the circle of radius 1.2 about (1, 1) meets the orthant
//! in two arcs, so its image is far from convex. Writes the sample as CSV
//! to stdout when given `--csv`.
use momentlab::cli::report::csv;
use momentlab::sampler::{convexity_defect, sample_image, CurveImage, CurveSpec};

fn main() -> momentlab::Result<()> {
    let circle = CurveSpec::Circle {
        center: [1.0, 1.0],
        radius: 1.2,
    };
    let cloud = sample_image(&circle, 10_000, 7)?;
    let image = CurveImage::new(&circle)?;
    if std::env::args().any(|a| a == "--csv") {
        print!("{}", csv(&cloud.points));
        return Ok(());
    }
    println!("arcs: {}", image.arcs.len());
    println!(
        "defect: {:.4}",
        convexity_defect(&cloud, &|x| image.distance(x))
    );
    let line = CurveSpec::Affine {
        point: vec![1.0, 0.0],
        direction: vec![-1.0, 1.0],
        range: None,
    };
    let img = CurveImage::new(&line)?;
    println!(
        "affine control defect: {:e}",
        convexity_defect(&sample_image(&line, 10_000, 7)?, &|x| img.distance(x))
    );
    Ok(())
}
