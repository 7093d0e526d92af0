//! Class numbers and fundamental units of Q(√d).

use redei::quadfield::make_field;

fn main() {
    for d in [-23i64, -47, 17, 41, 89, 241, 577] {
        let k = make_field(d).expect("squarefree d");
        print!("Q(sqrt({d})): h = {}, h+ = {}", k.class_number, k.narrow_class_number);
        if let Some(eps) = &k.fundamental_unit {
            let (x, y, den) = eps.integer_parts();
            print!(", eps = ({x} + {y}*sqrt({d}))/{den}, N(eps) = {}", eps.norm());
        }
        println!();
    }
}
