/** Escape text for interpolation into HTML/SVG markup. */
export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Percent string with stable precision for snapshot-friendly markup. */
export function pct(fraction: number): string {
  return `${(fraction * 100).toFixed(2)}%`;
}
