use tropkit::expr::parse_poly;
use tropkit::essential::essential_part;
use tropkit::factor::primitive_reduction;
use tropkit::supplement::supplement_poly;
use std::time::Instant;

fn main() {
    let f = parse_poly("x^2 + y^2 + 1*x*y + 0", None).unwrap().poly;
    let t0 = Instant::now();
    let g = supplement_poly(&f).unwrap();
    eprintln!("supplement poly: {} terms  ({:?})", g.num_terms(), t0.elapsed());
    let t0 = Instant::now();
    let g1 = primitive_reduction(&g).unwrap();
    eprintln!("reduced: {} terms ({:?})  = {}", g1.num_terms(), t0.elapsed(), g1);
    let t0 = Instant::now();
    let e = essential_part(&g1).unwrap();
    eprintln!("ess terms {} ({:?})", e.num_terms(), t0.elapsed());
    let t0 = Instant::now();
    let g2 = supplement_poly(&g1).unwrap();
    eprintln!("second supplement: {} terms ({:?})", g2.num_terms(), t0.elapsed());
    let t0 = Instant::now();
    let g2r = primitive_reduction(&g2).unwrap();
    eprintln!("second reduced: {} terms ({:?})", g2r.num_terms(), t0.elapsed());
}
