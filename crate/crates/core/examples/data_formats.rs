//! Reading `.names`/`.data` text and CSV, and writing them back out.

use c45::data::{parse_csv, parse_data, parse_names, serialize_data, serialize_names};

fn main() -> c45::Result<()> {
    let schema = parse_names(
        "| weather\n\
         play, stay.\n\
         outlook: sunny, overcast, rain.\n\
         temperature: continuous.\n",
    )?;
    let ds = parse_data("sunny,85,stay\novercast,?,play\nrain,70,play\n", schema)?;
    print!("{}{}", serialize_names(ds.schema()), serialize_data(&ds));

    let csv = parse_csv(
        "outlook,temp,decision\nsunny,85,stay\nrain,70,play\n",
        "decision",
    )?;
    for attr in csv.schema().attributes() {
        println!("{}: continuous={}", attr.name, attr.is_continuous());
    }

    // Errors name the offending line.
    if let Err(e) = parse_names("a, b.\nx continuous.\n") {
        println!("rejected: {e}");
    }
    Ok(())
}
