#!/usr/bin/env node
/**
 * Render cooling-run CSV files (the simulator CLI's output contract) to a
 * two-panel figure.
 *
 *   mrcool-figures out/fig1_delta1.0.csv out/fig1_delta1.1.csv \
 *     --out fig1.svg [--format svg|png|pdf] [--label "resonant" --label "detuned"]
 *     [--nbar-scale log|linear] [--title "..."]
 *
 * Exit codes: 0 success, 1 bad input (missing file, missing column, bad
 * flag), 2 rendering failure.
 */

import { parseArgs } from 'util'
import { CoolingSeries, CsvFormatError, readCoolingSeries } from './csv'
import { ImageFormat, renderToFile } from './render'

const FORMATS: ImageFormat[] = ['svg', 'png', 'pdf']

export async function main(argv: string[]): Promise<number> {
  let parsed
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: 'string' },
        format: { type: 'string', default: 'svg' },
        label: { type: 'string', multiple: true },
        title: { type: 'string' },
        'nbar-scale': { type: 'string', default: 'log' },
      },
    })
  } catch (err) {
    process.stderr.write(`argument error: ${(err as Error).message}\n`)
    return 1
  }
  const inputs = parsed.positionals
  const { out, format, label = [], title } = parsed.values
  const nbarScale = parsed.values['nbar-scale']
  if (inputs.length === 0) {
    process.stderr.write('no input CSV files given\n')
    return 1
  }
  if (!out) {
    process.stderr.write('missing --out <path>\n')
    return 1
  }
  if (!FORMATS.includes(format as ImageFormat)) {
    process.stderr.write(`unknown --format ${JSON.stringify(format)}; expected one of ${FORMATS.join(', ')}\n`)
    return 1
  }
  if (nbarScale !== 'log' && nbarScale !== 'linear') {
    process.stderr.write(`unknown --nbar-scale ${JSON.stringify(nbarScale)}; expected log or linear\n`)
    return 1
  }
  if (label.length > inputs.length) {
    process.stderr.write(`${label.length} labels for ${inputs.length} inputs\n`)
    return 1
  }

  let series: CoolingSeries[]
  try {
    series = inputs.map((path, i) => readCoolingSeries(path, label[i]))
  } catch (err) {
    if (err instanceof CsvFormatError || (err as NodeJS.ErrnoException).code === 'ENOENT') {
      process.stderr.write(`input error: ${(err as Error).message}\n`)
      return 1
    }
    throw err
  }

  try {
    await renderToFile(series, out, format as ImageFormat, { title, nbarScale })
  } catch (err) {
    process.stderr.write(`render error: ${(err as Error).message}\n`)
    return 2
  }
  process.stdout.write(`${out}\n`)
  return 0
}

/* c8 ignore next 4 */
if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code
  })
}
