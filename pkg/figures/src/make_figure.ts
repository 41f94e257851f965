import { makeFigure } from "./figure.js";
import { loadSpec } from "./spec.js";

function usage(): never {
  console.error("usage: make_figure --spec <figure-spec.json>");
  process.exit(2);
}

export function main(argv: string[]): number {
  const idx = argv.indexOf("--spec");
  if (idx === -1 || idx + 1 >= argv.length) usage();
  try {
    const output = makeFigure(loadSpec(argv[idx + 1]));
    console.log(output);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("make_figure.js")) {
  process.exit(main(process.argv.slice(2)));
}
