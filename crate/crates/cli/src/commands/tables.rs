//! `kljn tables`: regenerate the embedded reference tables as CSV,
//! flagging any cell that deviates more than 1% from the fixture.

use kljn_core::reference::{regenerate_all, TableReport};

use crate::commands::ensure_dir;
use crate::output::{format_value, resolve_out_dir, write_csv, write_json, Manifest};
use crate::{CliError, TablesArgs};

fn table_csv(table: &TableReport) -> String {
    let mut out = String::from("column,label,expected,computed,rel_deviation,flagged\n");
    for (column, cells) in table.columns.iter().zip(&table.cells) {
        for cell in cells {
            out.push_str(&format!(
                "{column},{},{},{},{},{}\n",
                cell.label,
                format_value(cell.expected),
                format_value(cell.computed),
                format_value(cell.rel_deviation),
                cell.flagged
            ));
        }
    }
    out
}

pub fn run(args: TablesArgs) -> Result<(), CliError> {
    let tables = regenerate_all()?;
    let dir = resolve_out_dir(args.out.out.as_deref());
    ensure_dir(&dir)?;
    let manifest = Manifest::new("tables", "reference-fixtures-v1", 0);

    let mut n_flagged = 0;
    for (index, table) in tables.iter().enumerate() {
        if args.out.format.csv() {
            let path = dir.join(format!("table{}.csv", index + 1));
            write_csv(&path, &manifest, &table_csv(table))?;
        }
        for cell in table.flagged_cells() {
            n_flagged += 1;
            println!(
                "flagged {}: {} expected {} computed {} ({:.2}% off)",
                table.name,
                cell.label,
                format_value(cell.expected),
                format_value(cell.computed),
                100.0 * cell.rel_deviation
            );
        }
    }
    if args.out.format.json() {
        write_json(&dir.join("tables.json"), &manifest, &tables)?;
    }
    println!(
        "wrote {} tables to {} ({n_flagged} flagged cells)",
        tables.len(),
        dir.display()
    );
    Ok(())
}
