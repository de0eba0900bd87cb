/** Deterministic SVG rendering of an attack-defense tree document.
 *
 * The tree is drawn as the kill-chain progression top to bottom: one
 * rectangular attack node per row with its recommended countermeasure
 * beside it as an ellipse (dashed link), mirroring the DOT export's
 * shapes. The layout is a pure function of the document, so the same
 * response always renders byte-identical markup. All ids and names are
 * taken verbatim from the document.
 */

import type { AdtreeAttackNode, AdtreeDefenseNode, AdtreeDocument } from "./api.js";
import { DecodeError, decodeAdtree } from "./decode.js";

const MARGIN = 24;
const BOX_W = 300;
const BOX_H = 72;
const ELLIPSE_RX = 160;
const ELLIPSE_RY = 36;
const H_GAP = 70;
const ROW_GAP = 36;

const ROW_H = Math.max(BOX_H, 2 * ELLIPSE_RY);
const ROW_PITCH = ROW_H + ROW_GAP;

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

interface Row {
  attack: AdtreeAttackNode;
  defense: AdtreeDefenseNode;
}

/** Pair each attack node with its defense, in progression (leaf-to-root) order. */
function progressionRows(tree: AdtreeDocument): Row[] {
  const defenses = new Map<string, AdtreeDefenseNode>();
  for (const node of tree.nodes) {
    if (node.kind === "defense") {
      defenses.set(node.id, node);
    }
  }
  const rows: Row[] = [];
  for (const node of tree.nodes) {
    if (node.kind !== "attack") {
      continue;
    }
    const defense = defenses.get(node.defense);
    if (defense === undefined) {
      throw new DecodeError(
        `adtree node '${node.id}'`,
        `references missing defense node '${node.defense}'`,
      );
    }
    rows.push({ attack: node, defense });
  }
  // document order is root-to-leaf; the operator reads the kill chain
  // in progression order, so flip it
  rows.reverse();
  return rows;
}

function textLines(
  x: number,
  topY: number,
  lines: { text: string; cls?: string; bold?: boolean }[],
): string {
  const spans = lines
    .map((line, i) => {
      const cls = line.cls === undefined ? "" : ` class="${line.cls}"`;
      const weight = line.bold === true ? ' font-weight="bold"' : "";
      return `<tspan x="${x}" y="${topY + i * 18}"${cls}${weight}>${escapeXml(line.text)}</tspan>`;
    })
    .join("");
  return `<text text-anchor="middle">${spans}</text>`;
}

function attackGroup(row: Row, index: number): string {
  const x = MARGIN;
  const y = MARGIN + index * ROW_PITCH + (ROW_H - BOX_H) / 2;
  const cx = x + BOX_W / 2;
  const { attack } = row;
  return (
    `<g class="attack-node" data-node-id="${escapeXml(attack.id)}">` +
    `<rect x="${x}" y="${y}" width="${BOX_W}" height="${BOX_H}" rx="4"/>` +
    textLines(cx, y + 22, [
      { text: attack.name },
      { text: attack.technique_id, cls: "technique-id" },
      { text: `stage ${attack.kill_chain_stage}: ${attack.stage_name}`, cls: "stage-label" },
    ]) +
    `</g>`
  );
}

function defenseGroup(row: Row, index: number): string {
  const cx = MARGIN + BOX_W + H_GAP + ELLIPSE_RX;
  const cy = MARGIN + index * ROW_PITCH + ROW_H / 2;
  const { defense } = row;
  return (
    `<g class="defense-node" data-node-id="${escapeXml(defense.id)}">` +
    `<ellipse cx="${cx}" cy="${cy}" rx="${ELLIPSE_RX}" ry="${ELLIPSE_RY}"/>` +
    textLines(cx, cy - 8, [
      { text: defense.name, cls: "defense-name", bold: true },
      {
        text: `${defense.countermeasure_id} · score ${defense.score.toFixed(4)}`,
        cls: "defense-score",
      },
    ]) +
    `</g>`
  );
}

function edges(rowCount: number): string {
  const parts: string[] = [];
  const chainX = MARGIN + BOX_W / 2;
  for (let i = 0; i < rowCount - 1; i += 1) {
    const yTop = MARGIN + i * ROW_PITCH + (ROW_H - BOX_H) / 2 + BOX_H;
    const yBottom = MARGIN + (i + 1) * ROW_PITCH + (ROW_H - BOX_H) / 2;
    parts.push(
      `<line class="chain-edge" x1="${chainX}" y1="${yTop}" x2="${chainX}" y2="${yBottom}" marker-end="url(#arrow)"/>`,
    );
  }
  for (let i = 0; i < rowCount; i += 1) {
    const y = MARGIN + i * ROW_PITCH + ROW_H / 2;
    parts.push(
      `<line class="defense-edge" x1="${MARGIN + BOX_W}" y1="${y}" x2="${MARGIN + BOX_W + H_GAP}" y2="${y}"/>`,
    );
  }
  return parts.join("");
}

export function adtreeSvg(tree: AdtreeDocument): string {
  const rows = progressionRows(tree);
  const width = 2 * MARGIN + BOX_W + H_GAP + 2 * ELLIPSE_RX;
  const height = 2 * MARGIN + rows.length * ROW_PITCH - (rows.length > 0 ? ROW_GAP : 0);
  const body =
    edges(rows.length) +
    rows.map((row, i) => attackGroup(row, i) + defenseGroup(row, i)).join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" class="adtree">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
    `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>` +
    body +
    `</svg>`
  );
}

/** Render a tree panel from an untrusted document: SVG on success, an
 * error panel naming the schema path on mismatch — never a blank panel.
 */
export function renderAdtreePanel(document: unknown): string {
  try {
    return adtreeSvg(decodeAdtree(document));
  } catch (error) {
    const detail =
      error instanceof DecodeError
        ? error.message
        : `tree rendering failed: ${String(error)}`;
    return (
      `<div class="error-panel" role="alert">` +
      `<strong>cannot render attack-defense tree</strong>` +
      `<p>${escapeXml(detail)}</p>` +
      `</div>`
    );
  }
}
