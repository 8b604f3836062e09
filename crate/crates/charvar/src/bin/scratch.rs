use charvar::poly::{parse_poly, Poly};
fn main() {
    let f = parse_poly("x^2 - z^2").unwrap();
    let g = parse_poly("x - z").unwrap();
    eprintln!("start divide 1");
    let q = f.try_div_exact(&g);
    eprintln!("q1 = {:?}", q.map(|p| p.canonical_string()));
    eprintln!("start divide 2");
    let q2 = parse_poly("x^2 + 1").unwrap().try_div_exact(&g);
    eprintln!("q2 = {:?}", q2.map(|p| p.canonical_string()));
    let h = parse_poly("M^-1*u + M").unwrap();
    let d = parse_poly("u + M^2").unwrap();
    eprintln!("start divide 3");
    let q3 = h.try_div_exact(&d);
    eprintln!("q3 = {:?}", q3.map(|p| p.canonical_string()));
}
