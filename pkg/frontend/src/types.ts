/** Wire types, mirroring the service payloads one to one. */

export interface NetworkNode {
  id: string;
  label: string;
  level: number;
}

export interface NetworkEdge {
  from: string;
  to: string;
}

export interface NetworkPayload {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface CommunityReport {
  author: number;
  name: string;
  total_citations: number;
  genealogical_citations: number;
  non_genealogical: number;
  ratio: number | null;
  verdict: string;
  copious_partners: number[];
  sibling_citers: Record<string, number>;
  lineage_score: number;
  threshold: { lower: number; upper: number };
}

export interface AuthorProfile {
  name: string;
  thesis: string;
  institute: string;
  country: string;
  domain: string;
  total_citations: number;
  year: number | null;
}

export interface SearchRow {
  id: number;
  name: string;
  institute: string;
  case_tag: string;
}

export type Pane = "network" | "profile" | "community";
