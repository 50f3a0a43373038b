//! Drive the experiment layer from code: parse a config and run `constants` and `classical`.

use sojourn_lab::experiment::{parse_config, run_command, Command};

const CONFIG: &str = r#"
impact_list = [10.0, 31.6, 100.0, 316.0, 1000.0]

[potential]
dimension = 2
alpha = 3.0
strength = 1.0
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let loaded = parse_config(CONFIG)?;
    println!("defaults filled: {}", loaded.defaulted.join(", "));
    let out = std::env::temp_dir().join("sojourn-lab-example");
    for cmd in [Command::Constants, Command::Classical] {
        let r = run_command(cmd, &loaded, CONFIG, &out, 2)?;
        println!(
            "{cmd}: exit {} -> {:?}",
            r.exit_code,
            r.artifacts.iter().map(|a| &a.0).collect::<Vec<_>>()
        );
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
