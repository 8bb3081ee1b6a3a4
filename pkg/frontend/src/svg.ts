/** Minimal deterministic SVG builder: fixed float formatting, no timestamps. */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 56, right: 16, top: 28, bottom: 44 };

export function fmt(x: number): string {
  // fixed 6 significant digits keeps output byte-stable across runs
  if (Object.is(x, -0)) x = 0;
  return Number(x.toPrecision(6)).toString();
}

export interface Scale {
  (x: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (x) => r0 + ((x - d0) / span) * (r1 - r0);
}

export class Svg {
  private parts: string[] = [];

  constructor(public width = WIDTH, public height = HEIGHT) {}

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}"` +
        ` fill="${fill}"${opacity !== 1 ? ` fill-opacity="${fmt(opacity)}"` : ""}/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}"` +
        ` stroke="${stroke}" stroke-width="${fmt(width)}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  path(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join(" ");
    this.parts.push(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${fmt(width)}"/>`);
  }

  polygon(points: Array<[number, number]>, fill: string, opacity = 1): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polygon points="${pts}" fill="${fill}"` +
        `${opacity !== 1 ? ` fill-opacity="${fmt(opacity)}"` : ""}/>`,
    );
  }

  text(x: number, y: number, content: string, size = 12, anchor = "middle"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}"` +
        ` font-family="sans-serif" text-anchor="${anchor}">${escapeXml(content)}</text>`,
    );
  }

  toString(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}"` +
      ` height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      this.parts.map((p) => "  " + p).join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Axes with ticks; returns the data-to-pixel scales. */
export function frame(
  svg: Svg,
  x0: number,
  x1: number,
  y0: number,
  y1: number,
  xlabel: string,
  ylabel: string,
  title: string,
): { sx: Scale; sy: Scale } {
  const sx = linearScale(x0, x1, MARGIN.left, WIDTH - MARGIN.right);
  const sy = linearScale(y0, y1, HEIGHT - MARGIN.bottom, MARGIN.top);
  svg.rect(0, 0, WIDTH, HEIGHT, "#ffffff");
  svg.line(MARGIN.left, MARGIN.top, MARGIN.left, HEIGHT - MARGIN.bottom, "#000000");
  svg.line(MARGIN.left, HEIGHT - MARGIN.bottom, WIDTH - MARGIN.right, HEIGHT - MARGIN.bottom, "#000000");
  const nticks = 5;
  for (let i = 0; i <= nticks; i++) {
    const xv = x0 + ((x1 - x0) * i) / nticks;
    const yv = y0 + ((y1 - y0) * i) / nticks;
    svg.line(sx(xv), HEIGHT - MARGIN.bottom, sx(xv), HEIGHT - MARGIN.bottom + 4, "#000000");
    svg.text(sx(xv), HEIGHT - MARGIN.bottom + 16, fmt(xv), 10);
    svg.line(MARGIN.left - 4, sy(yv), MARGIN.left, sy(yv), "#000000");
    svg.text(MARGIN.left - 8, sy(yv) + 3, fmt(yv), 10, "end");
  }
  svg.text(WIDTH / 2, HEIGHT - 8, xlabel, 12);
  svg.text(14, HEIGHT / 2, ylabel, 12);
  svg.text(WIDTH / 2, 16, title, 13);
  return { sx, sy };
}
