//! gen → sample → extract → retrieve → verify through the command-line
//! front end, run in-process in a scratch directory.

use herglotz::cli::main_with_args;

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (u, g, d, v) = (p("u.txt"), p("grid.csv"), p("data.txt"), p("v.txt"));
    let steps: [Vec<&str>; 5] = [
        vec!["gen", "--max-degree", "3", "--seed", "7", "--zero-mean", "--out", &u],
        vec!["sample", &u, "--radial-nodes", "24", "--out", &g],
        vec!["extract", &g, "--out", &d],
        vec!["retrieve", &d, "--out", &v],
        vec!["verify", &u, &v],
    ];
    for args in steps {
        println!("$ herglotz {}", args.join(" "));
        let status = main_with_args(std::iter::once("herglotz").chain(args.iter().copied()));
        println!("(exit {status})\n");
    }
    let status = main_with_args(["herglotz", "retrieve", d.as_str(), "--branch", "mean"]);
    println!("forcing the mean branch on zero-mean data: exit {status}");
}
