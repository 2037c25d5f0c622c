// Wire types mirroring the session service responses. The console is a pure
// client: every displayed number originates from one of these payloads.

export type IntensityLabel = 'Low' | 'Medium' | 'High';
export type AuthLabel = 'Operator' | 'Commander' | 'National';

export interface BelievedAsset {
  asset_id: string;
  function: string;
  posture: IntensityLabel;
  confidence: number;
}

export interface BeliefsView {
  opponent_activity: Record<string, IntensityLabel>;
  inferred_stratagems: { stratagem: string; confidence: number }[];
  believed_assets: BelievedAsset[];
}

export interface OwnAsset {
  id: string;
  function: string;
  posture: string;
  monitor_level: string;
  compromised: boolean;
}

export interface MissionTaskView {
  id: string;
  planned_start_hours: number;
  planned_duration_hours: number;
  pause_hours: number;
}

export interface OwnTruthView {
  posture: string;
  monitor_level: string;
  assets: OwnAsset[];
  mission?: {
    description: string;
    delay_hours: number;
    tasks: MissionTaskView[];
  };
}

export interface PendingAction {
  action_id: number;
  play: string;
  intensity: string;
  authorization: string; // "Granted" or "Pending:<level>"
  start: number;
  completion: number | null;
  outcome: string;
}

export interface SituationView {
  tick: number;
  side: string;
  current_auth: AuthLabel;
  beliefs: BeliefsView;
  own: OwnTruthView;
  active_phases: string[];
  pending_actions: PendingAction[];
}

export interface StratagemCard {
  stratagem: string;
  description: string;
  tactical_implementations: string[];
  infrastructure_properties: string;
  technological_requirements: string;
  goals_satisfied: string[];
  adversary_properties: string;
  effects_on_adversary: string;
  limitations_assumptions: string;
  implications: string;
  example_red_use: string;
  example_blue_countermeasure: string;
}

export interface PlayInfo {
  id: string;
  name: string;
  side: string;
  stratagems: string[];
  params: { name: string; kind: string }[];
  tags: string[];
  required_authorization: AuthLabel | null;
  duration_hours: number;
  jitter_hours: number;
  effects: { kind: string; magnitude: string; target: string }[];
  counters: string[];
  intensity_choices: IntensityLabel[];
  cards: StratagemCard[];
}

export interface WhatIfNode {
  digest: string;
  side_to_move: string;
  move: { play: string | null; intensity: string | null } | null;
  value: number | null;
  pruned_reason: string | null;
  children: WhatIfNode[];
  /** Raw byte slice of this node's value from the service response body. */
  rawValue?: string;
}

export interface RecommendationView {
  ranked: { play: string; intensity: string; score: number; rationale: string }[];
  executable_now: { play: string; intensity: string; score: number }[];
  awaiting: { play: string; needed_level: string }[];
}

export interface WhatIfResponse {
  recommendation: RecommendationView;
  tree: WhatIfNode;
}

export interface SessionEvent {
  seq: number;
  tick: number;
  kind: string;
  side: string;
  action_id: number;
  payload: Record<string, unknown>;
}

export interface MoveResponse {
  status: 'accepted' | 'pending' | 'rejected';
  action_id?: number;
  needed_level?: string;
  start?: number;
  completion?: number;
  reason?: string;
}

export interface AdvanceResponse {
  tick: number;
  delay_hours: number;
  delay_target_hours: number;
  red_goal_met: boolean;
}
