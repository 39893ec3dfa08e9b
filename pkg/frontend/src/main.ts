import * as THREE from 'three'
import { OrbitControls } from 'three/examples/jsm/controls/OrbitControls.js'
import { ComputeClient, type Vec3, type Vec4 } from './compute'
import { renderScene, setGroupVisible, type RenderedScene } from './render'
import { GROUPS, parseScene, SceneParseError, type Group, type SceneDocument } from './scene'
import { DebouncedLatest, LatestWins } from './scheduler'

const DEV = import.meta.env.DEV

const banner = document.getElementById('banner') as HTMLDivElement
const statusBox = document.getElementById('status') as HTMLDivElement

function showBanner(message: string): void {
  banner.textContent = message
  banner.style.display = 'block'
}

function clearBanner(): void {
  banner.style.display = 'none'
}

function devAssert(condition: boolean, message: string): void {
  if (DEV && !condition) {
    console.error(`dev assertion failed: ${message}`)
    showBanner(`dev assertion failed: ${message}`)
  }
}

const compute = new ComputeClient(
  '',
  DEV ? (op, params) => console.debug('[compute]', op, params) : null,
)

// --- three.js setup ---------------------------------------------------------

const renderer = new THREE.WebGLRenderer({ antialias: true })
renderer.setSize(window.innerWidth, window.innerHeight)
document.body.appendChild(renderer.domElement)

const scene3 = new THREE.Scene()
scene3.background = new THREE.Color('#101018')
scene3.add(new THREE.AmbientLight(0xffffff, 0.7))
const sun = new THREE.DirectionalLight(0xffffff, 1.2)
sun.position.set(4, 6, 8)
scene3.add(sun)

const camera = new THREE.PerspectiveCamera(
  45, window.innerWidth / window.innerHeight, 0.01, 500)
camera.position.set(0, 2.5, 9)

const controls = new OrbitControls(camera, renderer.domElement)
controls.enableDamping = true

window.addEventListener('resize', () => {
  camera.aspect = window.innerWidth / window.innerHeight
  camera.updateProjectionMatrix()
  renderer.setSize(window.innerWidth, window.innerHeight)
})

let rendered: RenderedScene | null = null

function loadDocument(doc: SceneDocument): void {
  if (rendered) rendered.root.removeFromParent()
  rendered = renderScene(doc)
  scene3.add(rendered.root)
  for (const group of GROUPS) {
    const box = document.querySelector<HTMLInputElement>(`#toggle-${group}`)
    if (box) setGroupVisible(rendered, group, box.checked)
  }
  statusBox.textContent = `${doc.entities.length} entities`
  clearBanner()
}

function loadText(text: string): void {
  try {
    loadDocument(parseScene(text))
  } catch (err) {
    if (err instanceof SceneParseError) {
      showBanner(`scene rejected — ${err.message}`)
    } else {
      showBanner(`failed to load scene: ${(err as Error).message}`)
    }
  }
}

// --- UI: file load + group toggles -----------------------------------------

const fileInput = document.getElementById('scene-file') as HTMLInputElement
fileInput.addEventListener('change', () => {
  const file = fileInput.files?.[0]
  if (!file) return
  void file.text().then(loadText)
})

for (const group of GROUPS) {
  const box = document.querySelector<HTMLInputElement>(`#toggle-${group}`)
  box?.addEventListener('change', () => {
    if (rendered) setGroupVisible(rendered, group as Group, box.checked)
  })
}

// --- drag the construction point -------------------------------------------
// Dragging moves A_s in the stereographic view; the core recomputes A, A3,
// A4 and A0 through the compute boundary.

const raycaster = new THREE.Raycaster()
const dragPlane = new THREE.Plane(new THREE.Vector3(0, 0, 1), 0)
let dragging = false

const constructionUpdate = new LatestWins(
  async (target: Vec3) => {
    const { point4 } = await compute.unproject(target)
    const trace = await compute.construction(point4 as Vec4)
    return { point4: point4 as Vec4, trace }
  },
  ({ point4, trace }) => {
    const norm = Math.hypot(...point4)
    devAssert(Math.abs(norm - 1) < 1e-6, `dragged point left the sphere (|A| = ${norm})`)
    if (trace.atPole) {
      statusBox.textContent = 'A = N — stereographic image at ∞'
      return
    }
    statusBox.textContent =
      `A = (${point4.map((v) => v.toFixed(3)).join(', ')})` +
      `  A₀ = (${trace.a0!.map((v) => v.toFixed(3)).join(', ')})`
    updateMarker('point-a3', 'xi', trace.a3)
    updateMarker('point-a4', 'omega', trace.a4)
    updateMarker('point-as', 'stereo', trace.as!)
  },
  (err) => showBanner((err as Error).message),
)

function updateMarker(id: string, group: Group, position: Vec3): void {
  const obj = rendered?.byId.get(id)
  if (obj) obj.position.set(...position)
  void group
}

function pointerTarget(event: PointerEvent): Vec3 | null {
  const rect = renderer.domElement.getBoundingClientRect()
  const ndc = new THREE.Vector2(
    ((event.clientX - rect.left) / rect.width) * 2 - 1,
    -((event.clientY - rect.top) / rect.height) * 2 + 1,
  )
  raycaster.setFromCamera(ndc, camera)
  const hit = new THREE.Vector3()
  if (!raycaster.ray.intersectPlane(dragPlane, hit)) return null
  if (hit.length() > 40) {
    statusBox.textContent = 'near the pole — image heading to ∞'
  }
  return [hit.x, hit.y, hit.z]
}

renderer.domElement.addEventListener('pointerdown', (event) => {
  if (!event.shiftKey) return
  dragging = true
  controls.enabled = false
})

renderer.domElement.addEventListener('pointermove', (event) => {
  if (!dragging) return
  const target = pointerTarget(event)
  if (target) constructionUpdate.request(target)
})

window.addEventListener('pointerup', () => {
  dragging = false
  controls.enabled = true
})

// --- freehand trace ---------------------------------------------------------

let traceMode = false
let stroke: Vec3[] = []
const lifted: Vec4[] = []

const traceToggle = document.getElementById('trace-mode') as HTMLInputElement
traceToggle.addEventListener('change', () => {
  traceMode = traceToggle.checked
  if (traceMode) {
    stroke = []
    lifted.length = 0
  }
})

const traceUpdate = new LatestWins(
  async (target: Vec3) => {
    const { point4 } = await compute.unproject(target)
    const imgs = await compute.projectDouble(point4 as Vec4)
    return { point4: point4 as Vec4, imgs }
  },
  ({ point4, imgs }) => {
    lifted.push(point4)
    appendTracePoint('trace-xi', 'xi', imgs.xi)
    appendTracePoint('trace-omega', 'omega', imgs.omega)
  },
  (err) => showBanner((err as Error).message),
)

const traceLines = new Map<string, THREE.Vector3[]>()

function appendTracePoint(id: string, group: Group, p: Vec3): void {
  if (!rendered) return
  let pts = traceLines.get(id)
  if (!pts) {
    pts = []
    traceLines.set(id, pts)
  }
  pts.push(new THREE.Vector3(...p))
  if (pts.length < 2) return
  const old = rendered.byId.get(id)
  if (old) old.removeFromParent()
  const line = new THREE.Line(
    new THREE.BufferGeometry().setFromPoints(pts),
    new THREE.LineBasicMaterial({ color: '#ffd166' }),
  )
  line.name = id
  rendered.byId.set(id, line)
  rendered.groups[group].add(line)
}

renderer.domElement.addEventListener('pointermove', (event) => {
  if (!traceMode || event.buttons !== 1) return
  const target = pointerTarget(event)
  if (!target) return
  stroke.push(target)
  traceUpdate.request(target)
})

const exportButton = document.getElementById('export-trace') as HTMLButtonElement
exportButton.addEventListener('click', () => {
  if (stroke.length < 2) {
    showBanner('stroke too short to export (need at least 2 samples)')
    return
  }
  // The stroke re-imports through the CLI `lift` command, which rebuilds
  // the same scene the viewer displayed.
  const doc = { stroke, lifted }
  const blob = new Blob([JSON.stringify(doc)], { type: 'application/json' })
  const a = document.createElement('a')
  a.href = URL.createObjectURL(blob)
  a.download = 'trace.json'
  a.click()
  URL.revokeObjectURL(a.href)
})

// --- Hopf controls ----------------------------------------------------------

const sSlider = document.getElementById('s-slider') as HTMLInputElement
const psiSlider = document.getElementById('psi-slider') as HTMLInputElement

interface TorusArgs {
  s: number
  interval: [number, number]
}

function torusInterval(s: number): [number, number] {
  // One closed pass: 4 pi for half-integer s, 2 pi otherwise.
  return [0, Number.isInteger(s) ? 2 * Math.PI : 4 * Math.PI]
}

const torusUpdate = new DebouncedLatest<TorusArgs, void>(
  async ({ s, interval }) => {
    const t0 = performance.now()
    const result = await compute.torus(s, interval, 256, 64)
    const elapsed = performance.now() - t0
    if (DEV && elapsed > 500) {
      console.warn(`torus recompute took ${elapsed.toFixed(0)} ms`)
    }
    if (!rendered) return
    const vertices = result.vertices4.map(
      (v): Vec3 => [v[0], v[2], v[3]],  // omega view of the display frame
    )
    const old = rendered.byId.get('torus-live')
    if (old) old.removeFromParent()
    const geom = new THREE.BufferGeometry()
    const flat = new Float32Array(vertices.length * 3)
    vertices.forEach((v, i) => flat.set(v, i * 3))
    geom.setAttribute('position', new THREE.BufferAttribute(flat, 3))
    geom.setIndex(result.triangles)
    geom.computeVertexNormals()
    const mesh = new THREE.Mesh(geom, new THREE.MeshStandardMaterial({
      color: '#66c2a5', side: THREE.DoubleSide, transparent: true, opacity: 0.85,
    }))
    mesh.name = 'torus-live'
    rendered.byId.set('torus-live', mesh)
    rendered.groups.omega.add(mesh)
  },
  () => {},
  (err) => showBanner((err as Error).message),
  { delayMs: 150 },
)

const fiberUpdate = new LatestWins(
  async (psi: number) => {
    const s = Number(sSlider.value)
    const { points } = await compute.clelia(s, [psi])
    const base: Vec3 = [points[0][0], points[0][1] - 1, points[0][2]]
    const fiber = await compute.fiber(base)
    if (DEV) {
      // Round-trip assertion: every fiber sample maps back to the base point.
      const canonical = fiber.points4.map(
        (p): Vec4 => [p[0], p[2] - 1, p[1], p[3] - 1],
      )
      const checks = await Promise.all(
        canonical.filter((_, i) => i % 64 === 0).map((p) => compute.hopfMap(p)),
      )
      for (const { point } of checks) {
        const err = Math.hypot(
          point[0] - base[0], point[1] - base[1], point[2] - base[2])
        devAssert(err < 1e-6, `fiber left its base point (err ${err})`)
      }
    }
    return fiber
  },
  (fiber) => {
    if (!rendered) return
    const pts = fiber.points4.map((p) => new THREE.Vector3(p[0], p[2], p[3]))
    const old = rendered.byId.get('fiber-live')
    if (old) old.removeFromParent()
    const loop = new THREE.LineLoop(
      new THREE.BufferGeometry().setFromPoints(pts),
      new THREE.LineBasicMaterial({ color: '#e31a1c' }),
    )
    loop.name = 'fiber-live'
    rendered.byId.set('fiber-live', loop)
    rendered.groups.omega.add(loop)
  },
  (err) => showBanner((err as Error).message),
)

sSlider.addEventListener('input', () => {
  const s = Number(sSlider.value)
  torusUpdate.request({ s, interval: torusInterval(s) })
  fiberUpdate.request(Number(psiSlider.value))
})

// psi only moves the fiber; the mesh is untouched (caching contract).
psiSlider.addEventListener('input', () => {
  fiberUpdate.request(Number(psiSlider.value))
})

// --- boot -------------------------------------------------------------------

function animate(): void {
  requestAnimationFrame(animate)
  controls.update()
  renderer.render(scene3, camera)
}
animate()

// Try to fetch a default scene from the server, if one is being served.
fetch('/scenes/default.json')
  .then((r) => (r.ok ? r.text() : Promise.reject(new Error('no default scene'))))
  .then(loadText)
  .catch(() => {
    statusBox.textContent = 'load a scene file to begin'
  })
