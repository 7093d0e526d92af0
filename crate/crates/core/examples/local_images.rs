//! Local images of the descent map for y² = x(x² − 1)(x² − 4).

use redei::arith::LocalField;
use redei::localdescent::{local_image, unpack, SplitModel};

fn main() {
    let model = SplitModel::base();
    for field in [LocalField::Real, LocalField::Qp(2), LocalField::Qp(3), LocalField::UnramQuad(3)] {
        let img = local_image(&model, field).expect("image");
        println!("{field:?}: dim {} (target {})", img.dim(), img.target_dim);
        for v in &img.vectors {
            let row: Vec<String> = unpack(field, model.degree(), *v).iter().map(|c| c.label()).collect();
            println!("  ({})", row.join(", "));
        }
    }
}
