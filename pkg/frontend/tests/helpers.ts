import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

export function fixturePath(name: string): string {
  return fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
}

export function readFixture(name: string): string {
  return readFileSync(fixturePath(name), "utf-8");
}

/** Pull one tagged polyline back out of a rendered chart as [x, y] pairs. */
export function seriesPoints(svg: string, label: string): [number, number][] {
  const match = svg.match(
    new RegExp(`<polyline data-series="${label}"[^>]* points="([^"]*)"`),
  );
  if (!match) throw new Error(`series ${label} not found in svg`);
  return match[1].split(" ").map((pair) => {
    const [x, y] = pair.split(",").map(Number);
    return [x, y];
  });
}
