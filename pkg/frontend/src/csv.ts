/**
 * Strict reader for the cooling-run CSV contract.
 *
 * Files are RFC-4180 (CRLF or LF line ends, optional quoting) with the fixed
 * header `N,t,nbar,survival,fidelity,mode`; one row per measurement index,
 * row N=0 being the pre-measurement state. Anything that deviates fails with
 * the file and column/row named.
 */

import { readFileSync } from 'fs'
import { basename } from 'path'

export const REQUIRED_COLUMNS = ['N', 't', 'nbar', 'survival', 'fidelity', 'mode'] as const

export interface CoolingSeries {
  path: string
  label: string
  n: number[]
  t: number[]
  nbar: number[]
  survival: number[]
  fidelity: number[]
  mode: string
}

export class CsvFormatError extends Error {}

/** Minimal RFC-4180 parser: quoted fields, doubled quotes, CRLF/LF rows. */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = []
  let field = ''
  let row: string[] = []
  let inQuotes = false
  let i = 0
  const pushField = () => {
    row.push(field)
    field = ''
  }
  const pushRow = () => {
    pushField()
    rows.push(row)
    row = []
  }
  while (i < text.length) {
    const c = text[i]
    if (inQuotes) {
      if (c === '"') {
        if (text[i + 1] === '"') {
          field += '"'
          i += 2
          continue
        }
        inQuotes = false
        i += 1
        continue
      }
      field += c
      i += 1
      continue
    }
    if (c === '"') {
      inQuotes = true
      i += 1
    } else if (c === ',') {
      pushField()
      i += 1
    } else if (c === '\r' && text[i + 1] === '\n') {
      pushRow()
      i += 2
    } else if (c === '\n') {
      pushRow()
      i += 1
    } else {
      field += c
      i += 1
    }
  }
  if (inQuotes) {
    throw new CsvFormatError('unterminated quoted field')
  }
  if (field.length > 0 || row.length > 0) {
    pushRow()
  }
  return rows.filter((r) => !(r.length === 1 && r[0] === ''))
}

function parseNumber(raw: string, path: string, column: string, rowIndex: number): number {
  const value = Number(raw)
  if (raw.trim() === '' || !Number.isFinite(value)) {
    throw new CsvFormatError(`${path}: row ${rowIndex}: column "${column}" is not a finite number (got ${JSON.stringify(raw)})`)
  }
  return value
}

export function readCoolingSeries(path: string, label?: string): CoolingSeries {
  const rows = parseCsv(readFileSync(path, 'utf-8'))
  if (rows.length === 0) {
    throw new CsvFormatError(`${path}: empty file`)
  }
  const header = rows[0]
  const index = new Map(header.map((name, i) => [name, i]))
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new CsvFormatError(
        `${path}: missing required column "${column}" (header has: ${header.join(', ')})`,
      )
    }
  }
  if (rows.length < 2) {
    throw new CsvFormatError(`${path}: no data rows under the header`)
  }
  const series: CoolingSeries = {
    path,
    label: label ?? basename(path).replace(/\.csv$/i, ''),
    n: [],
    t: [],
    nbar: [],
    survival: [],
    fidelity: [],
    mode: '',
  }
  const col = (name: string) => index.get(name)!
  rows.slice(1).forEach((row, j) => {
    if (row.length !== header.length) {
      throw new CsvFormatError(`${path}: row ${j + 1}: expected ${header.length} fields, got ${row.length}`)
    }
    series.n.push(parseNumber(row[col('N')], path, 'N', j + 1))
    series.t.push(parseNumber(row[col('t')], path, 't', j + 1))
    series.nbar.push(parseNumber(row[col('nbar')], path, 'nbar', j + 1))
    series.survival.push(parseNumber(row[col('survival')], path, 'survival', j + 1))
    series.fidelity.push(parseNumber(row[col('fidelity')], path, 'fidelity', j + 1))
    series.mode = row[col('mode')]
  })
  return series
}
