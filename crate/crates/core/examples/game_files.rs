//! Games from JSON files, and the command line driven in-process.

use powidx::cli;
use powidx::io::parse_game;

fn main() -> powidx::Result<()> {
    let text = r#"{"class": "binary", "kind": "weighted", "quota": 3, "weights": [2, 1, 1, 1]}"#;
    let game = parse_game(text)?;
    println!("parsed a {} game on {} voters", game.class(), game.n());

    let dir = std::env::temp_dir().join("powidx-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("w3211.json");
    std::fs::write(&path, text)?;

    let mut out = Vec::new();
    let mut err = Vec::new();
    for args in [
        vec!["powidx", "index", "--game", path.to_str().unwrap(), "--index", "ssi"],
        vec!["powidx", "index", "--game", path.to_str().unwrap(), "--index", "nucleolus", "--output", "csv"],
        vec!["powidx", "check", "--game", path.to_str().unwrap()],
    ] {
        let code = cli::run(args, &mut out, &mut err);
        println!("exit {code}");
    }
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
