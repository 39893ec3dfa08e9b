// Thin client for the compute boundary.  The viewer does no geometry math
// of its own: every displayed coordinate comes back from one of these calls.

export type Vec3 = [number, number, number]
export type Vec4 = [number, number, number, number]

export type FrameName = 'standard' | 'hopf'

export interface ConstructionResult {
  a3: Vec3
  a4: Vec3
  atPole: boolean
  a0?: [number, number]
  as?: Vec3
}

export interface FiberResult {
  points4: Vec4[]
  base: { psi: number; phi: number }
}

export interface TorusResult {
  vertices4: Vec4[]
  triangles: number[]
  rows: number
  cols: number
  closedPsi: boolean
}

export class ComputeError extends Error {
  constructor(op: string, detail: string) {
    super(`compute "${op}" failed: ${detail}`)
    this.name = 'ComputeError'
  }
}

export class ComputeClient {
  private readonly baseUrl: string
  private readonly devLog: ((op: string, params: unknown) => void) | null

  constructor(baseUrl = '', devLog: ((op: string, params: unknown) => void) | null = null) {
    this.baseUrl = baseUrl.replace(/\/$/, '')
    this.devLog = devLog
  }

  async call<T>(op: string, params: Record<string, unknown>): Promise<T> {
    this.devLog?.(op, params)
    let response: Response
    try {
      response = await fetch(`${this.baseUrl}/api/compute`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ op, params }),
      })
    } catch (err) {
      throw new ComputeError(op, (err as Error).message)
    }
    if (!response.ok) {
      let detail = `HTTP ${response.status}`
      try {
        const body = await response.json()
        if (typeof body?.detail === 'string') detail = body.detail
      } catch {
        // keep the status-code message
      }
      throw new ComputeError(op, detail)
    }
    const body = await response.json()
    if (body === null || typeof body !== 'object' || !('result' in body)) {
      throw new ComputeError(op, 'response is missing "result"')
    }
    return body.result as T
  }

  unproject(point: Vec3, frame: FrameName = 'standard'): Promise<{ point4: Vec4 }> {
    return this.call('unproject', { point, frame })
  }

  project(point4: Vec4, frame: FrameName = 'standard'): Promise<{ point?: Vec3; atInfinity?: boolean }> {
    return this.call('project', { point4, frame })
  }

  projectDouble(point4: Vec4, frame: FrameName = 'standard'): Promise<{ xi: Vec3; omega: Vec3 }> {
    return this.call('project_double', { point4, frame })
  }

  construction(point4: Vec4, frame: FrameName = 'standard'): Promise<ConstructionResult> {
    return this.call('construction', { point4, frame })
  }

  fiber(base: Vec3, samples = 256): Promise<FiberResult> {
    return this.call('fiber', { base, samples })
  }

  clelia(s: number, psi: number[]): Promise<{ points: Vec3[] }> {
    return this.call('clelia', { s, psi })
  }

  torus(
    s: number,
    interval: [number, number],
    psiResolution = 96,
    betaResolution = 32,
  ): Promise<TorusResult> {
    return this.call('torus', { s, interval, psiResolution, betaResolution })
  }

  hopfMap(point4: Vec4): Promise<{ point: Vec3 }> {
    return this.call('hopf_map', { point4 })
  }
}
