// Build three.js objects from a parsed scene document.  Entities are put
// into one THREE.Group per scene group so visibility toggles are cheap.

import * as THREE from 'three'
import type { Geometry, Group, SceneDocument, SceneEntity, Style, Vec3 } from './scene'
import { GROUPS } from './scene'

// Ksi/omega/stereo views are drawn side by side in modeling space.
const GROUP_OFFSETS: Record<Group, Vec3> = {
  xi: [-3.0, 0, 0],
  omega: [3.0, 0, 0],
  stereo: [0, 0, 0],
  source3d: [0, 0, 0],
}

export interface RenderedScene {
  root: THREE.Group
  groups: Record<Group, THREE.Group>
  byId: Map<string, THREE.Object3D>
  labels: { position: Vec3; text: string; group: Group }[]
}

function materialColor(style: Style): THREE.Color {
  return new THREE.Color(style.color)
}

function buildPoint(position: Vec3, style: Style): THREE.Object3D {
  const geom = new THREE.SphereGeometry(0.035, 16, 12)
  const mat = new THREE.MeshBasicMaterial({
    color: materialColor(style),
    transparent: style.opacity < 1,
    opacity: style.opacity,
  })
  const mesh = new THREE.Mesh(geom, mat)
  mesh.position.set(...position)
  return mesh
}

function buildPolyline(pieces: Vec3[][], closed: boolean, style: Style): THREE.Object3D {
  const holder = new THREE.Group()
  const mat = new THREE.LineBasicMaterial({
    color: materialColor(style),
    transparent: style.opacity < 1,
    opacity: style.opacity,
    linewidth: style.lineWidth,
  })
  for (const piece of pieces) {
    const geom = new THREE.BufferGeometry().setFromPoints(
      piece.map((p) => new THREE.Vector3(...p)),
    )
    holder.add(closed && pieces.length === 1
      ? new THREE.LineLoop(geom, mat)
      : new THREE.Line(geom, mat))
  }
  return holder
}

function buildMesh(vertices: Vec3[], indices: number[], style: Style): THREE.Object3D {
  const geom = new THREE.BufferGeometry()
  const flat = new Float32Array(vertices.length * 3)
  vertices.forEach((v, i) => flat.set(v, i * 3))
  geom.setAttribute('position', new THREE.BufferAttribute(flat, 3))
  geom.setIndex(indices)
  geom.computeVertexNormals()
  const mat = new THREE.MeshStandardMaterial({
    color: materialColor(style),
    transparent: style.opacity < 1,
    opacity: style.opacity,
    side: THREE.DoubleSide,
    flatShading: false,
  })
  return new THREE.Mesh(geom, mat)
}

function buildSphere(center: Vec3, radius: number, style: Style): THREE.Object3D {
  const geom = new THREE.SphereGeometry(Math.max(radius, 1e-4), 32, 16)
  const mat = new THREE.MeshStandardMaterial({
    color: materialColor(style),
    transparent: true,
    opacity: Math.min(style.opacity, 0.35),
    side: THREE.DoubleSide,
  })
  const mesh = new THREE.Mesh(geom, mat)
  mesh.position.set(...center)
  return mesh
}

export function buildGeometry(geometry: Geometry, style: Style): THREE.Object3D | null {
  switch (geometry.kind) {
    case 'point':
      return buildPoint(geometry.position, style)
    case 'polyline':
      return buildPolyline(geometry.pieces, geometry.closed, style)
    case 'mesh':
      return buildMesh(geometry.vertices, geometry.indices, style)
    case 'analytic-sphere':
      return buildSphere(geometry.center, geometry.radius, style)
    case 'label':
      return null // labels are rendered as DOM overlays by the caller
  }
}

export function renderScene(doc: SceneDocument): RenderedScene {
  const root = new THREE.Group()
  const groups = {} as Record<Group, THREE.Group>
  for (const name of GROUPS) {
    const g = new THREE.Group()
    g.name = name
    g.position.set(...GROUP_OFFSETS[name])
    groups[name] = g
    root.add(g)
  }

  const byId = new Map<string, THREE.Object3D>()
  const labels: RenderedScene['labels'] = []
  for (const entity of doc.entities) {
    if (entity.geometry.kind === 'label') {
      labels.push({
        position: entity.geometry.position,
        text: entity.geometry.text,
        group: entity.group,
      })
      continue
    }
    const obj = buildGeometry(entity.geometry, entity.style)
    if (obj === null) continue
    obj.name = entity.id
    obj.userData.entity = entity
    byId.set(entity.id, obj)
    groups[entity.group].add(obj)
  }
  return { root, groups, byId, labels }
}

export function setGroupVisible(scene: RenderedScene, group: Group, visible: boolean): void {
  scene.groups[group].visible = visible
}

/** Replace the object for one entity in place (used by live updates). */
export function replaceEntity(scene: RenderedScene, entity: SceneEntity): void {
  const old = scene.byId.get(entity.id)
  if (old) old.removeFromParent()
  const obj = buildGeometry(entity.geometry, entity.style)
  if (obj === null) {
    scene.byId.delete(entity.id)
    return
  }
  obj.name = entity.id
  obj.userData.entity = entity
  scene.byId.set(entity.id, obj)
  scene.groups[entity.group].add(obj)
}
