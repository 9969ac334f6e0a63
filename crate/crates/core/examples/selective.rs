use radiolb::selective::{global_round_bound, greedy_selective, is_selective, min_selective_size, size_bound};
use radiolb::SetFamily;

fn main() -> radiolb::Result<()> {
    for n in 1..=5 {
        for k in 1..=n {
            let greedy = greedy_selective(n, k)?;
            println!(
                "n={n} k={k}  min={}  greedy={}",
                min_selective_size(n, k)?,
                greedy.describe()
            );
        }
    }

    let pair = SetFamily::new(3, vec![0b011, 0b110])?;
    println!("{} (3,2)-selective: {:?}", pair.describe(), is_selective(&pair, 3, 2)?);

    for (n, k) in [(128, 2), (1 << 20, 1 << 10), (100, 50)] {
        let b = size_bound(n, k);
        println!("size bound n={n} k={k}: {:.4} (in range: {})", b.value, b.in_range);
    }
    for n in [1, 1536 * 1536, 4 * 1536 * 1536] {
        println!("round bound n={n}: {}", global_round_bound(n));
    }
    Ok(())
}
