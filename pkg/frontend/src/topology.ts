/**
 * Level-set topology of a 3-d voxel mask: connected components with
 * periodic wrap, and the Euler characteristic V - E + F - C of the cubical
 * complex (solid ball 1, solid torus 0). Mirrors the solver's reporting so
 * sidecar numerics agree exactly.
 */

export interface Topology {
  components: number;
  euler_characteristic: number;
  occupied: number;
  is_ring: boolean;
}

export function levelSetTopology(
  mod: Float64Array,
  counts: number[],
  level: number,
): Topology {
  const [nx, ny, nz] = counts;
  const n = nx * ny * nz;
  const occ = new Uint8Array(n);
  let occupied = 0;
  for (let i = 0; i < n; i++) {
    if (mod[i] > level) {
      occ[i] = 1;
      occupied++;
    }
  }
  const idx = (ix: number, iy: number, iz: number) => iz + nz * (iy + ny * ix);

  // flood fill with periodic wrap
  const labels = new Int32Array(n).fill(-1);
  let components = 0;
  const stack: number[] = [];
  for (let start = 0; start < n; start++) {
    if (!occ[start] || labels[start] >= 0) continue;
    components++;
    labels[start] = components;
    stack.push(start);
    while (stack.length) {
      const cur = stack.pop()!;
      const iz = cur % nz;
      const iy = Math.floor(cur / nz) % ny;
      const ix = Math.floor(cur / (nz * ny));
      const neigh = [
        idx((ix + 1) % nx, iy, iz),
        idx((ix + nx - 1) % nx, iy, iz),
        idx(ix, (iy + 1) % ny, iz),
        idx(ix, (iy + ny - 1) % ny, iz),
        idx(ix, iy, (iz + 1) % nz),
        idx(ix, iy, (iz + nz - 1) % nz),
      ];
      for (const nb of neigh) {
        if (occ[nb] && labels[nb] < 0) {
          labels[nb] = components;
          stack.push(nb);
        }
      }
    }
  }

  // cubical counting without periodic identification (valid when the set
  // stays clear of the box faces, which the centered rings do)
  const vx = nx + 1;
  const vy = ny + 1;
  const vz = nz + 1;
  const vid = (ix: number, iy: number, iz: number) => iz + vz * (iy + vy * ix);
  const verts = new Set<number>();
  const edges = new Set<number>();
  const faces = new Set<number>();
  let cubes = 0;
  for (let ix = 0; ix < nx; ix++) {
    for (let iy = 0; iy < ny; iy++) {
      for (let iz = 0; iz < nz; iz++) {
        if (!occ[idx(ix, iy, iz)]) continue;
        cubes++;
        for (const a of [0, 1]) {
          for (const b of [0, 1]) {
            for (const c of [0, 1]) {
              verts.add(vid(ix + a, iy + b, iz + c));
            }
          }
        }
        // 12 edges: 4 per direction, keyed by base corner and direction
        for (const [d, offs] of [
          [0, [[0, 0], [0, 1], [1, 0], [1, 1]]],
          [1, [[0, 0], [0, 1], [1, 0], [1, 1]]],
          [2, [[0, 0], [0, 1], [1, 0], [1, 1]]],
        ] as [number, number[][]][]) {
          for (const [p, q] of offs) {
            const base =
              d === 0
                ? vid(ix, iy + p, iz + q)
                : d === 1
                  ? vid(ix + p, iy, iz + q)
                  : vid(ix + p, iy + q, iz);
            edges.add(base * 3 + d);
          }
        }
        // 6 faces: 2 per orientation, keyed by base corner and normal axis
        for (const d of [0, 1, 2]) {
          for (const p of [0, 1]) {
            const base =
              d === 0
                ? vid(ix + p, iy, iz)
                : d === 1
                  ? vid(ix, iy + p, iz)
                  : vid(ix, iy, iz + p);
            faces.add(base * 3 + d);
          }
        }
      }
    }
  }
  const chi = verts.size - edges.size + faces.size - cubes;
  return {
    components,
    euler_characteristic: chi,
    occupied,
    is_ring: components === 1 && chi === 0,
  };
}
