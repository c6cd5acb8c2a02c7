use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::cyclotomic::Cyclotomic;
use super::table::{CharacterTable, ConjClass};
use crate::error::{Error, Result};

const PSL27: &str = include_str!("../../data/psl27.json");
const A5: &str = include_str!("../../data/a5.json");
const A6: &str = include_str!("../../data/a6.json");
const S5: &str = include_str!("../../data/s5.json");

/// Registry keys of the shipped tables.
pub const BUILTIN_NAMES: [&str; 12] = [
    "TRIVIAL", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "PSL27", "A5", "A6", "S5",
];

/// Looks up a shipped table by registry key (case-insensitive).
pub fn builtin(name: &str) -> Result<Arc<CharacterTable>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<CharacterTable>>>> = OnceLock::new();
    let key = name.to_ascii_uppercase();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = match key.as_str() {
        "TRIVIAL" | "Z1" => cyclic_named(1, "TRIVIAL"),
        "PSL27" => CharacterTable::from_json(PSL27)?,
        "A5" => CharacterTable::from_json(A5)?,
        "A6" => CharacterTable::from_json(A6)?,
        "S5" => CharacterTable::from_json(S5)?,
        k => match k.strip_prefix('Z').and_then(|n| n.parse::<u32>().ok()) {
            Some(n) if (2..=8).contains(&n) => cyclic(n),
            _ => return Err(Error::UnknownGroup(name.to_string())),
        },
    };
    let table = Arc::new(table);
    cache.lock().unwrap().insert(key, table.clone());
    Ok(table)
}

/// Character table of the cyclic group of order `n`.
///
/// Class `k` holds `g^k`. Labels follow the order-plus-letter convention with
/// letters assigned by increasing `k`, and `chi_{j+1}(g^k) = z_n^{jk}`.
pub fn cyclic(n: u32) -> CharacterTable {
    cyclic_named(n, &format!("Z{n}"))
}

fn cyclic_named(n: u32, name: &str) -> CharacterTable {
    assert!(n >= 1);
    let mut seen: HashMap<u32, u8> = HashMap::new();
    let classes: Vec<ConjClass> = (0..n)
        .map(|k| {
            let order = n / n.gcd(&k);
            let letter = seen.entry(order).or_insert(0);
            let label = format!("{order}{}", (b'A' + *letter) as char);
            *letter += 1;
            ConjClass { label, size: 1, order }
        })
        .collect();
    let power_map = (0..n as usize)
        .map(|k| {
            let order = classes[k].order as usize;
            (0..order).map(|m| (k * m) % n as usize).collect()
        })
        .collect();
    let irreps = (0..n as i64)
        .map(|j| (0..n as i64).map(|k| Cyclotomic::root_of_unity(n, j * k)).collect())
        .collect();
    CharacterTable::new(name, n as u64, classes, power_map, irreps, None)
        .expect("cyclic table is well formed")
}
