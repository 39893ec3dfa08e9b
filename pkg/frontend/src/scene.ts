// Scene document schema ("tetraproj-scene/1") as produced by the CLI.
// Parsing is strict: anything that doesn't match the schema throws
// SceneParseError with a path so the UI can show a useful banner.

export const FORMAT_VERSION = 'tetraproj-scene/1'

export const GROUPS = ['xi', 'omega', 'stereo', 'source3d'] as const
export type Group = (typeof GROUPS)[number]

export type Vec3 = [number, number, number]

export interface Style {
  color: string
  opacity: number
  lineWidth: number
}

export interface PointGeom {
  kind: 'point'
  position: Vec3
}

export interface PolylineGeom {
  kind: 'polyline'
  pieces: Vec3[][]
  closed: boolean
}

export interface MeshGeom {
  kind: 'mesh'
  vertices: Vec3[]
  indices: number[]
}

export interface SphereGeom {
  kind: 'analytic-sphere'
  center: Vec3
  radius: number
}

export interface LabelGeom {
  kind: 'label'
  position: Vec3
  text: string
}

export type Geometry = PointGeom | PolylineGeom | MeshGeom | SphereGeom | LabelGeom

export interface SceneEntity {
  id: string
  group: Group
  style: Style
  flags: Record<string, boolean>
  geometry: Geometry
}

export interface SceneDocument {
  version: string
  frame: Record<string, unknown>
  entities: SceneEntity[]
}

export class SceneParseError extends Error {
  readonly path: string

  constructor(message: string, path: string) {
    super(`${path}: ${message}`)
    this.name = 'SceneParseError'
    this.path = path
  }
}

function fail(message: string, path: string): never {
  throw new SceneParseError(message, path)
}

function asRecord(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== 'object' || value === null || Array.isArray(value)) {
    fail('expected an object', path)
  }
  return value as Record<string, unknown>
}

function asVec3(value: unknown, path: string): Vec3 {
  if (!Array.isArray(value) || value.length !== 3) {
    fail('expected [x, y, z]', path)
  }
  for (const [i, v] of value.entries()) {
    if (typeof v !== 'number' || !Number.isFinite(v)) {
      fail('expected a finite number', `${path}[${i}]`)
    }
  }
  return value as Vec3
}

function parseStyle(value: unknown, path: string): Style {
  const raw = asRecord(value, path)
  const { color, opacity, lineWidth } = raw
  if (typeof color !== 'string') fail('color must be a string', path)
  if (typeof opacity !== 'number') fail('opacity must be a number', path)
  if (typeof lineWidth !== 'number') fail('lineWidth must be a number', path)
  return { color, opacity, lineWidth }
}

function parseGeometry(kind: string, value: unknown, path: string): Geometry {
  const wrapper = asRecord(value, path)
  const body = wrapper[kind]
  if (body === undefined) fail(`geometry is missing a "${kind}" payload`, path)

  switch (kind) {
    case 'point':
      return { kind, position: asVec3(body, `${path}.point`) }
    case 'label': {
      const raw = asRecord(body, `${path}.label`)
      if (typeof raw.text !== 'string') fail('label text must be a string', path)
      return {
        kind,
        position: asVec3(raw.position, `${path}.label.position`),
        text: raw.text,
      }
    }
    case 'analytic-sphere': {
      const raw = asRecord(body, `${path}.analytic-sphere`)
      if (typeof raw.radius !== 'number' || raw.radius < 0) {
        fail('radius must be a nonnegative number', path)
      }
      return {
        kind,
        center: asVec3(raw.center, `${path}.analytic-sphere.center`),
        radius: raw.radius,
      }
    }
    case 'polyline': {
      const raw = asRecord(body, `${path}.polyline`)
      if (!Array.isArray(raw.pieces)) fail('pieces must be an array', path)
      const pieces = raw.pieces.map((piece, i) => {
        if (!Array.isArray(piece) || piece.length < 2) {
          fail('each piece needs at least 2 points', `${path}.pieces[${i}]`)
        }
        return piece.map((p, j) => asVec3(p, `${path}.pieces[${i}][${j}]`))
      })
      return { kind, pieces, closed: raw.closed === true }
    }
    case 'mesh': {
      const raw = asRecord(body, `${path}.mesh`)
      if (!Array.isArray(raw.vertices)) fail('vertices must be an array', path)
      if (!Array.isArray(raw.indices)) fail('indices must be an array', path)
      // Vertices are stored flat: [x0, y0, z0, x1, y1, z1, ...].
      if (raw.vertices.length % 3 !== 0) {
        fail('flat vertex array length must be a multiple of 3', path)
      }
      for (const [i, v] of raw.vertices.entries()) {
        if (typeof v !== 'number' || !Number.isFinite(v)) {
          fail('expected a finite number', `${path}.mesh.vertices[${i}]`)
        }
      }
      const vertices: Vec3[] = []
      for (let i = 0; i < raw.vertices.length; i += 3) {
        vertices.push([raw.vertices[i], raw.vertices[i + 1], raw.vertices[i + 2]] as Vec3)
      }
      if (raw.indices.length % 3 !== 0) {
        fail('indices must come in triangles', path)
      }
      for (const idx of raw.indices) {
        if (!Number.isInteger(idx) || idx < 0 || idx >= vertices.length) {
          fail(`index ${idx} out of range`, `${path}.mesh.indices`)
        }
      }
      return { kind, vertices, indices: raw.indices as number[] }
    }
    default:
      fail(`unknown entity kind "${kind}"`, path)
  }
}

function parseEntity(value: unknown, path: string): SceneEntity {
  const raw = asRecord(value, path)
  if (typeof raw.id !== 'string' || raw.id === '') fail('missing id', path)
  if (typeof raw.kind !== 'string') fail('missing kind', path)
  if (!GROUPS.includes(raw.group as Group)) {
    fail(`group must be one of ${GROUPS.join(', ')}`, path)
  }
  const flags: Record<string, boolean> = {}
  if (raw.flags !== undefined) {
    for (const [k, v] of Object.entries(asRecord(raw.flags, `${path}.flags`))) {
      if (typeof v !== 'boolean') fail('flags must be booleans', `${path}.flags`)
      flags[k] = v
    }
  }
  return {
    id: raw.id,
    group: raw.group as Group,
    style: parseStyle(raw.style, `${path}.style`),
    flags,
    geometry: parseGeometry(raw.kind, raw.geometry, `${path}.geometry`),
  }
}

/** Parse and validate a scene document from raw JSON text or a decoded value. */
export function parseScene(input: string | unknown): SceneDocument {
  let value: unknown = input
  if (typeof input === 'string') {
    try {
      value = JSON.parse(input)
    } catch (err) {
      fail(`malformed JSON: ${(err as Error).message}`, '$')
    }
  }
  const raw = asRecord(value, '$')
  if (raw.version !== FORMAT_VERSION) {
    fail(`unsupported version ${JSON.stringify(raw.version)}`, '$.version')
  }
  const frame = asRecord(raw.frame, '$.frame')
  if (!Array.isArray(raw.entities)) fail('entities must be an array', '$.entities')
  const seen = new Set<string>()
  const entities = raw.entities.map((e, i) => {
    const entity = parseEntity(e, `$.entities[${i}]`)
    if (seen.has(entity.id)) fail(`duplicate id "${entity.id}"`, `$.entities[${i}]`)
    seen.add(entity.id)
    return entity
  })
  return { version: FORMAT_VERSION, frame, entities }
}
