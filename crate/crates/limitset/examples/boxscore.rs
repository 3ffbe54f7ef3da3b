use limitset::cli::parse_config;
use limitset::limitsets::samplers::{sample_furstenberg, product_structure_check, ProductMode, ProductDiagnostic};
use limitset::limitsets::{enumerate_elements, EnumerationOptions};
use limitset::limitsets::discrete::discreteness_report;
use limitset::isometry::TupleKind;

fn main() {
    let text = "\
field.minpoly = x^2 - 2
group.r = 2
gen.M = [[1 + t, t], [1, 1]]
gen.N = [[1 - t, -t], [1, 1]]
";
    let cfg = parse_config(text).unwrap();
    let set6 = enumerate_elements(&cfg.group, &EnumerationOptions::with_length(4)).unwrap();
    let report = discreteness_report(&cfg.group, &set6);
    for p in &report.places { println!("place {}: {}", p.place, p.status); }
    let hyp = set6.iter().filter(|(_, e)| e.class.kind == TupleKind::Hyperbolic).count();
    println!("hyperbolic tuples at L=4: {}", hyp);
    for l in [8usize, 10] {
        let set = enumerate_elements(&cfg.group, &EnumerationOptions::with_length(l)).unwrap();
        let sample = sample_furstenberg(&cfg.group, &set);
        if let Ok(ProductDiagnostic::EmptyBoxScore(s)) = product_structure_check(&sample, ProductMode::FullProduct) {
            println!("L={}: {} points, empty-box score {}", l, sample.points.len(), s);
        } else {
            println!("L={}: diagnostic unavailable", l);
        }
    }
}
