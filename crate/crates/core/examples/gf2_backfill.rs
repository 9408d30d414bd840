//! Row reduction of a small parity-check matrix: rank, backfilled echelon
//! form, null space and the reference solution used for pooling.

use vitriq::BitMatrix;

fn main() {
    let b: BitMatrix = "5 6
101001
010101
011100
011010
110001"
        .parse()
        .expect("valid matrix");

    println!("B (rank {}):\n{b}", b.rank());
    println!("echelon:\n{}", b.row_echelon());
    println!("backfilled:\n{}", b.backfill_optimize());

    let three = b.prefix(3).unwrap();
    println!("null space of the first 3 rows:");
    for v in three.null_space_basis() {
        println!("  {v}");
    }
    for y in ["000", "101", "111"] {
        let y = y.parse().unwrap();
        let z = three.min_integer_solution(&y).unwrap();
        println!("smallest z with B_3 z = {y}: {z}");
    }
}
