/**
 * Assemble the two-panel cooling figure from CSV series and write it out.
 *
 * Panel (a): mean phonon number vs measurement count, log y by default.
 * Panel (b): survival probability vs measurement count, with a ground-state
 * population inset. Rendering never recomputes physics; it is a pure
 * function of the CSV contents.
 */

import { writeFileSync } from 'fs'
import { existsSync } from 'fs'
import { CoolingSeries } from './csv'
import { MARKERS, Marker, PALETTE, PanelFrame, Scale, drawFrame, drawLegend, drawSeries, linearScale, logScale } from './plot'

export type ImageFormat = 'svg' | 'png' | 'pdf'
export type AxisKind = 'log' | 'linear'

export interface FigureOptions {
  title?: string
  nbarScale?: AxisKind
  width?: number
  height?: number
}

interface StyledSeries extends CoolingSeries {
  color: string
  markerKind: Marker
}

function style(seriesList: CoolingSeries[]): StyledSeries[] {
  return seriesList.map((s, i) => ({
    ...s,
    color: PALETTE[i % PALETTE.length],
    markerKind: MARKERS[i % MARKERS.length],
  }))
}

function extent(values: number[]): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const v of values) {
    if (v < lo) lo = v
    if (v > hi) hi = v
  }
  return [lo, hi]
}

function nbarPanelScale(seriesList: StyledSeries[], kind: AxisKind, range: [number, number]): { scale: Scale; dropped: number } {
  if (kind === 'linear') {
    const [lo, hi] = extent(seriesList.flatMap((s) => s.nbar))
    return { scale: linearScale([Math.min(0, lo), hi * 1.05 || 1], range), dropped: 0 }
  }
  const positive = seriesList.flatMap((s) => s.nbar.filter((v) => v > 0))
  const dropped = seriesList.flatMap((s) => s.nbar).length - positive.length
  if (positive.length === 0) {
    throw new Error('nbar panel: log axis requested but no strictly positive values; use --nbar-scale linear')
  }
  const [lo, hi] = extent(positive)
  return { scale: logScale([lo / 1.5, hi * 1.5], range), dropped }
}

export function buildFigureSvg(seriesList: CoolingSeries[], options: FigureOptions = {}): string {
  if (seriesList.length === 0) {
    throw new Error('no input series')
  }
  const styled = style(seriesList)
  const width = options.width ?? 980
  const height = options.height ?? 430
  const nbarKind = options.nbarScale ?? 'log'
  const fontAttr = 'font-family="DejaVu Sans, Helvetica, Arial, sans-serif"'

  const nAll = styled.flatMap((s) => s.n)
  const [nLo, nHi] = extent(nAll)
  const xDomain: [number, number] = [Math.min(0, nLo), nHi === nLo ? nLo + 1 : nHi]

  const panelA = { x: 90, y: 46, width: 330, height: 300 }
  const panelB = { x: 560, y: 46, width: 330, height: 300 }

  const xScaleA = linearScale(xDomain, [panelA.x, panelA.x + panelA.width], 6)
  const xScaleB = linearScale(xDomain, [panelB.x, panelB.x + panelB.width], 6)
  const { scale: yScaleA, dropped } = nbarPanelScale(styled, nbarKind, [panelA.y + panelA.height, panelA.y])
  if (dropped > 0) {
    process.stderr.write(`note: dropped ${dropped} non-positive nbar value(s) from the log panel\n`)
  }
  const yScaleB = linearScale([0, 1], [panelB.y + panelB.height, panelB.y], 5)

  const frameA: PanelFrame = {
    ...panelA,
    xScale: xScaleA,
    yScale: yScaleA,
    xLabel: 'measurements N',
    yLabel: 'mean phonon number',
    title: '(a)',
  }
  const frameB: PanelFrame = {
    ...panelB,
    xScale: xScaleB,
    yScale: yScaleB,
    xLabel: 'measurements N',
    yLabel: 'survival probability',
    title: '(b)',
  }

  // fidelity inset inside panel (b), lower right
  const inset = { x: panelB.x + 150, y: panelB.y + 150, width: 160, height: 130 }
  const insetFrame: PanelFrame = {
    ...inset,
    xScale: linearScale(xDomain, [inset.x, inset.x + inset.width], 3),
    yScale: linearScale([0, 1.02], [inset.y + inset.height, inset.y], 3),
    xLabel: '',
    yLabel: '',
    fontSize: 9,
  }

  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" ${fontAttr}>`,
  )
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`)
  if (options.title) {
    parts.push(`<text x="${width / 2}" y="22" font-size="15" text-anchor="middle">${options.title.replace(/&/g, '&amp;').replace(/</g, '&lt;')}</text>`)
  }
  parts.push(drawFrame(frameA))
  parts.push(drawFrame(frameB))
  for (const s of styled) {
    const pairsA = s.n
      .map((nv, i) => [nv, s.nbar[i]] as const)
      .filter(([, v]) => nbarKind === 'linear' || v > 0)
    parts.push(drawSeries(frameA, pairsA.map(([nv]) => nv), pairsA.map(([, v]) => v), s.color, s.markerKind))
    parts.push(drawSeries(frameB, s.n, s.survival, s.color, s.markerKind))
  }
  parts.push(`<rect x="${inset.x}" y="${inset.y}" width="${inset.width}" height="${inset.height}" fill="white"/>`)
  parts.push(drawFrame(insetFrame))
  parts.push(
    `<text x="${inset.x + inset.width / 2}" y="${inset.y - 4}" font-size="9" text-anchor="middle">ground-state population</text>`,
  )
  for (const s of styled) {
    parts.push(drawSeries(insetFrame, s.n, s.fidelity, s.color, s.markerKind, 3))
  }
  parts.push(drawLegend(panelA.x + 6, panelA.y + 16, styled.map((s) => ({ label: s.label, color: s.color, markerKind: s.markerKind }))))
  parts.push('</svg>')
  return parts.join('\n')
}

function fontDirs(): string[] {
  const candidates = ['/usr/share/fonts', '/usr/local/share/fonts']
  // matplotlib ships DejaVu with its python package; use it when present
  for (const root of ['/usr/lib/python3/dist-packages', '/usr/local/lib/python3.10/dist-packages']) {
    candidates.push(`${root}/matplotlib/mpl-data/fonts/ttf`)
  }
  return candidates.filter((dir) => existsSync(dir))
}

export async function svgToPng(svg: string): Promise<Uint8Array> {
  const { Resvg } = await import('@resvg/resvg-js')
  const resvg = new Resvg(svg, {
    fitTo: { mode: 'zoom', value: 2 },
    font: { loadSystemFonts: true, fontDirs: fontDirs(), defaultFontFamily: 'DejaVu Sans' },
    background: 'white',
  })
  return resvg.render().asPng()
}

export async function pngToPdf(png: Uint8Array, width: number, height: number): Promise<Uint8Array> {
  const { PDFDocument } = await import('pdf-lib')
  const doc = await PDFDocument.create()
  const page = doc.addPage([width, height])
  const image = await doc.embedPng(png)
  page.drawImage(image, { x: 0, y: 0, width, height })
  return doc.save()
}

export async function renderToFile(
  seriesList: CoolingSeries[],
  outPath: string,
  format: ImageFormat,
  options: FigureOptions = {},
): Promise<void> {
  const svg = buildFigureSvg(seriesList, options)
  if (format === 'svg') {
    writeFileSync(outPath, svg)
    return
  }
  const png = await svgToPng(svg)
  if (format === 'png') {
    writeFileSync(outPath, png)
    return
  }
  const width = options.width ?? 980
  const height = options.height ?? 430
  const pdf = await pngToPdf(png, width, height)
  writeFileSync(outPath, pdf)
}
