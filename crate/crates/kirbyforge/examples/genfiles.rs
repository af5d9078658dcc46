fn main() {
    use kirbyforge::diagram::{catalog, ComponentId, Framing, Role};
    let mut hopf = catalog::hopf_positive();
    hopf = catalog::set_role(&hopf, ComponentId(1), Role::Surgery, Framing::Framed(0));
    hopf = catalog::set_role(&hopf, ComponentId(2), Role::Surgery, Framing::Framed(0));
    println!("HOPF\n{}", hopf.serialize());
    let (fig3a, pair) = kirbyforge::moves::gadget::fig3_tangle();
    println!("FIG3A\n{}", fig3a.serialize());
    println!("PAIR {} {}", pair.0, pair.1);
    let (fig3b, _h) = kirbyforge::moves::gadget::gadget_insert(&fig3a, pair).unwrap();
    println!("FIG3B\n{}", fig3b.serialize());
    let tre = catalog::poincare_sphere();
    println!("POINCARE\n{}", tre.serialize());
}
