/**
 * Dependency-free SVG plotting primitives: linear/log scales, tick
 * generation, polyline series with cycling markers, axis/legend drawing.
 * Output is a deterministic function of the inputs (no timestamps, no ids).
 */

export interface Scale {
  map(value: number): number
  ticks(): number[]
  domain: [number, number]
}

export function linearScale(domain: [number, number], range: [number, number], tickCount = 5): Scale {
  const [d0, d1] = domain
  const [r0, r1] = range
  const span = d1 - d0 || 1
  return {
    domain,
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    ticks: () => niceTicks(d0, d1, tickCount),
  }
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale requires strictly positive bounds, got [${d0}, ${d1}]`)
  }
  const [r0, r1] = range
  const l0 = Math.log10(d0)
  const l1 = Math.log10(d1)
  const span = l1 - l0 || 1
  return {
    domain,
    map: (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0),
    ticks: () => logTicks(d0, d1),
  }
}

export function niceTicks(min: number, max: number, count: number): number[] {
  if (!(max > min)) {
    return [min]
  }
  const rawStep = (max - min) / Math.max(1, count)
  const power = Math.floor(Math.log10(rawStep))
  const base = rawStep / 10 ** power
  const niceBase = base <= 1 ? 1 : base <= 2 ? 2 : base <= 5 ? 5 : 10
  const step = niceBase * 10 ** power
  const start = Math.ceil(min / step) * step
  const ticks: number[] = []
  for (let v = start; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v)
  }
  return ticks
}

export function logTicks(min: number, max: number): number[] {
  const lo = Math.ceil(Math.log10(min) - 1e-9)
  const hi = Math.floor(Math.log10(max) + 1e-9)
  const ticks: number[] = []
  for (let p = lo; p <= hi; p += 1) {
    ticks.push(10 ** p)
  }
  if (ticks.length === 0) {
    ticks.push(min, max)
  }
  return ticks
}

export function formatTick(value: number): string {
  if (value === 0) return '0'
  const magnitude = Math.abs(value)
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    const exp = Math.floor(Math.log10(magnitude))
    const mantissa = value / 10 ** exp
    const m = Math.abs(mantissa - 1) < 1e-9 ? '' : `${Number(mantissa.toFixed(2))}×`
    return `${m}1e${exp}`
  }
  return `${Number(value.toPrecision(6))}`
}

export const PALETTE = ['#b22222', '#1f77b4', '#555555', '#2ca02c', '#9467bd', '#e07b00']
export const MARKERS = ['triangle', 'square', 'circle', 'diamond'] as const
export type Marker = (typeof MARKERS)[number]

const esc = (s: string) => s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')

export function marker(kind: Marker, x: number, y: number, size: number, color: string): string {
  const h = size / 2
  const f = (v: number) => v.toFixed(2)
  switch (kind) {
    case 'circle':
      return `<circle cx="${f(x)}" cy="${f(y)}" r="${f(h)}" fill="${color}"/>`
    case 'square':
      return `<rect x="${f(x - h)}" y="${f(y - h)}" width="${f(size)}" height="${f(size)}" fill="${color}"/>`
    case 'triangle':
      return `<polygon points="${f(x)},${f(y - h)} ${f(x - h)},${f(y + h)} ${f(x + h)},${f(y + h)}" fill="${color}"/>`
    case 'diamond':
      return `<polygon points="${f(x)},${f(y - h)} ${f(x + h)},${f(y)} ${f(x)},${f(y + h)} ${f(x - h)},${f(y)}" fill="${color}"/>`
  }
}

export interface PanelFrame {
  x: number
  y: number
  width: number
  height: number
  xScale: Scale
  yScale: Scale
  xLabel: string
  yLabel: string
  title?: string
  fontSize?: number
}

export function drawFrame(frame: PanelFrame): string {
  const { x, y, width, height, xScale, yScale, fontSize = 12 } = frame
  const parts: string[] = []
  parts.push(`<rect x="${x}" y="${y}" width="${width}" height="${height}" fill="none" stroke="#222" stroke-width="1"/>`)
  for (const tick of xScale.ticks()) {
    const px = xScale.map(tick)
    if (px < x - 0.5 || px > x + width + 0.5) continue
    parts.push(`<line x1="${px.toFixed(2)}" y1="${y + height}" x2="${px.toFixed(2)}" y2="${(y + height - 5).toFixed(2)}" stroke="#222" stroke-width="1"/>`)
    parts.push(
      `<text x="${px.toFixed(2)}" y="${(y + height + fontSize + 4).toFixed(2)}" font-size="${fontSize}" text-anchor="middle">${esc(formatTick(tick))}</text>`,
    )
  }
  for (const tick of yScale.ticks()) {
    const py = yScale.map(tick)
    if (py < y - 0.5 || py > y + height + 0.5) continue
    parts.push(`<line x1="${x}" y1="${py.toFixed(2)}" x2="${(x + 5).toFixed(2)}" y2="${py.toFixed(2)}" stroke="#222" stroke-width="1"/>`)
    parts.push(
      `<text x="${(x - 6).toFixed(2)}" y="${(py + fontSize * 0.35).toFixed(2)}" font-size="${fontSize}" text-anchor="end">${esc(formatTick(tick))}</text>`,
    )
  }
  parts.push(
    `<text x="${(x + width / 2).toFixed(2)}" y="${(y + height + 2.6 * fontSize).toFixed(2)}" font-size="${fontSize + 1}" text-anchor="middle">${esc(frame.xLabel)}</text>`,
  )
  parts.push(
    `<text x="${(x - 46).toFixed(2)}" y="${(y + height / 2).toFixed(2)}" font-size="${fontSize + 1}" text-anchor="middle" transform="rotate(-90 ${(x - 46).toFixed(2)} ${(y + height / 2).toFixed(2)})">${esc(frame.yLabel)}</text>`,
  )
  if (frame.title) {
    parts.push(
      `<text x="${(x + width / 2).toFixed(2)}" y="${(y - 8).toFixed(2)}" font-size="${fontSize + 2}" text-anchor="middle">${esc(frame.title)}</text>`,
    )
  }
  return parts.join('\n')
}

export function drawSeries(
  frame: PanelFrame,
  xs: number[],
  ys: number[],
  color: string,
  markerKind: Marker,
  markerSize = 6,
): string {
  const points: Array<[number, number]> = []
  for (let i = 0; i < xs.length; i += 1) {
    const px = frame.xScale.map(xs[i])
    const py = frame.yScale.map(ys[i])
    if (Number.isFinite(px) && Number.isFinite(py)) {
      points.push([px, py])
    }
  }
  const parts: string[] = []
  if (points.length > 1) {
    const path = points.map(([px, py]) => `${px.toFixed(2)},${py.toFixed(2)}`).join(' ')
    parts.push(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.4"/>`)
  }
  for (const [px, py] of points) {
    parts.push(marker(markerKind, px, py, markerSize, color))
  }
  return parts.join('\n')
}

export function drawLegend(x: number, y: number, entries: Array<{ label: string; color: string; markerKind: Marker }>, fontSize = 12): string {
  const parts: string[] = []
  entries.forEach((entry, i) => {
    const ey = y + i * (fontSize + 8)
    parts.push(`<line x1="${x}" y1="${ey}" x2="${x + 26}" y2="${ey}" stroke="${entry.color}" stroke-width="1.4"/>`)
    parts.push(marker(entry.markerKind, x + 13, ey, 6, entry.color))
    parts.push(`<text x="${x + 32}" y="${ey + fontSize * 0.35}" font-size="${fontSize}">${esc(entry.label)}</text>`)
  })
  return parts.join('\n')
}
