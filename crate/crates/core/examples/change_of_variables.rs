//! An integral form and the substitution `x = x₁ − c_{k−1}y₁`, `y = k c_k y₁`
//! that removes its `x^{k−1}y` term.
use binform::forms::{change_of_variables, transformed_box, IntegerBinaryForm};
use num_bigint::BigInt;

fn main() {
    let phi = IntegerBinaryForm::parse("coeffs=[3,5,-2,7]").unwrap();
    let cv = change_of_variables(&phi).unwrap();
    let psi = cv.transformed();
    let show = |c: &[BigInt]| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    println!("phi coefficients (c_k first): [{}]", show(phi.coeffs()));
    println!("after substitution:            [{}]", show(psi.coeffs()));
    println!("x = x1 + ({})·y1, y = {}·y1", cv.substitution.x_from_y1, cv.substitution.y_from_y1);
    let (x1, y1) = (BigInt::from(4), BigInt::from(-3));
    let (x, y) = cv.substitution.map(&x1, &y1);
    println!("phi({x}, {y}) = {} = psi({x1}, {y1}) = {}", phi.evaluate(&x, &y), psi.evaluate(&x1, &y1));
    println!("box in the new coordinates for X = 1000: {:?}", transformed_box(&phi, 1000));
}
