// Situation board: believed opponent activity, own posture and assets,
// active phases, running actions, and the awaiting-authorization tray.
// Renders only /situation and /events data — never opponent ground truth.

import { badgeClass, escapeHtml } from '../html.js';
import type { TrayEntry } from '../state.js';
import type { PendingAction, SituationView } from '../types.js';

const CHANNELS = [
  'IntelGatheringActivity',
  'EffectOnResources',
  'DefensePosture',
  'AssetStatus',
];

export function renderSituation(
  view: SituationView,
  tray: TrayEntry[],
  active: PendingAction[],
): string {
  const activity = CHANNELS.map((channel) => {
    const level = view.beliefs.opponent_activity[channel] ?? 'quiet';
    return `<div class="channel"><span class="channel-name">${escapeHtml(channel)}</span>` +
      `<span class="${badgeClass(level)}" data-channel="${escapeHtml(channel)}">${escapeHtml(level)}</span></div>`;
  }).join('');

  const inferred = view.beliefs.inferred_stratagems
    .map(
      (entry) =>
        `<li><code>${escapeHtml(entry.stratagem)}</code> ` +
        `<span class="confidence">${Math.round(entry.confidence * 100)}%</span></li>`,
    )
    .join('');

  const believed = view.beliefs.believed_assets
    .map(
      (asset) =>
        `<li><code>${escapeHtml(asset.asset_id)}</code> ${escapeHtml(asset.function)}` +
        ` <span class="confidence">${Math.round(asset.confidence * 100)}%</span></li>`,
    )
    .join('');

  const ownAssets = view.own.assets
    .map(
      (asset) =>
        `<li><code>${escapeHtml(asset.id)}</code> ${escapeHtml(asset.function)}` +
        ` posture <span class="${badgeClass(asset.posture)}">${escapeHtml(asset.posture)}</span>` +
        `${asset.compromised ? ' <strong class="alert">compromised</strong>' : ''}</li>`,
    )
    .join('');

  const mission = view.own.mission
    ? `<p class="mission">${escapeHtml(view.own.mission.description)} — delay ` +
      `<strong>${view.own.mission.delay_hours}h</strong></p>` +
      `<ul class="tasks">${view.own.mission.tasks
        .map(
          (task) =>
            `<li>${escapeHtml(task.id)}: start ${task.planned_start_hours}h, ` +
            `${task.planned_duration_hours}h${task.pause_hours ? `, paused +${task.pause_hours}h` : ''}</li>`,
        )
        .join('')}</ul>`
    : '';

  const phases = view.active_phases
    .map((phase) => `<span class="phase">${escapeHtml(phase)}</span>`)
    .join(' ');

  const running = active
    .map(
      (action) =>
        `<li data-action="${action.action_id}">#${action.action_id} ` +
        `<code>${escapeHtml(action.play)}</code> @ ${escapeHtml(action.intensity)}` +
        ` — completes t${action.completion ?? '?'}</li>`,
    )
    .join('');

  return `
<section class="pane" id="situation-pane">
  <h2>Situation — tick ${view.tick} <span class="auth">auth ${escapeHtml(view.current_auth)}</span></h2>
  <h3>Believed opponent activity</h3>
  <div class="channels">${activity}</div>
  <h3>Inferred stratagems</h3>
  <ul class="inferred">${inferred || '<li class="empty">none yet</li>'}</ul>
  <h3>Believed opponent assets</h3>
  <ul class="believed">${believed || '<li class="empty">none observed</li>'}</ul>
  <h3>Own posture <span class="${badgeClass(view.own.posture)}">${escapeHtml(view.own.posture)}</span>
      monitor <span class="${badgeClass(view.own.monitor_level)}">${escapeHtml(view.own.monitor_level)}</span></h3>
  ${mission}
  <ul class="own-assets">${ownAssets}</ul>
  <h3>Active phases</h3>
  <div class="phases">${phases || '<span class="empty">none</span>'}</div>
  <h3>Actions in flight</h3>
  <ul class="running">${running || '<li class="empty">none</li>'}</ul>
  ${renderAwaitingTray(tray)}
</section>`;
}

export function renderAwaitingTray(tray: TrayEntry[]): string {
  const rows = tray
    .map(
      (entry) =>
        `<li class="tray-entry" data-action="${entry.actionId}">#${entry.actionId} ` +
        `<code>${escapeHtml(entry.play)}</code> @ ${escapeHtml(entry.intensity)}` +
        ` — needs <span class="needed">${escapeHtml(entry.neededLevel)}</span>` +
        ` <button class="authorize" data-action="${entry.actionId}" ` +
        `data-level="${escapeHtml(entry.neededLevel)}">authorize</button></li>`,
    )
    .join('');
  return `
  <h3>Awaiting authorization</h3>
  <ul id="awaiting-tray">${rows || '<li class="empty">nothing pending</li>'}</ul>`;
}
