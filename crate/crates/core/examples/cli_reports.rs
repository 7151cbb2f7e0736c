// Drive the command-line front end in process and capture its output.

use hardy_cone::cli::run_with;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let runs: [&[&str]; 3] = [
        &[
            "hardy-cone",
            "check",
            "--space",
            "chain:200",
            "--weight",
            "pow:0.5",
            "--p",
            "2",
        ],
        &[
            "hardy-cone",
            "table",
            "--kind",
            "constant-vs-p",
            "--weight",
            "const:1",
            "--p",
            "1.5,2,3",
        ],
        &["hardy-cone", "dump-space", "--space", "tree:binary:1"],
    ];
    for args in runs {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(args.iter().copied(), &mut out, &mut err);
        println!("$ {}  -> exit {code}", args[1..].join(" "));
        let text = String::from_utf8(out)?;
        for line in text.lines().take(12) {
            println!("  {line}");
        }
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
