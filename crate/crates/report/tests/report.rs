use agroweather_core::{
    difference_series, summary_stats, AttributeId, DerivedSeries, GeoPoint, ReferenceKind, SeasonSpec,
};
use agroweather_report::{
    compose_pdf, generate_summary, page_count, render_chart, ChartDrawing, ChartInput, NlgSummary, PageLayout,
    ReportError, ReportSpec, SummaryInput, Templates,
};
use chrono::{NaiveDate, TimeZone, Utc};

const ALL: [AttributeId; 18] = [
    AttributeId::TMax,
    AttributeId::TMin,
    AttributeId::TMean,
    AttributeId::DiurnalRange,
    AttributeId::Rain,
    AttributeId::RainCumulative,
    AttributeId::Evaporation,
    AttributeId::Radiation,
    AttributeId::RhAtTmax,
    AttributeId::RhAtTmin,
    AttributeId::VapourPressure,
    AttributeId::Mslp,
    AttributeId::EtShortCrop,
    AttributeId::EtTallCrop,
    AttributeId::GddDaily,
    AttributeId::GddCumulative,
    AttributeId::Vpd,
    AttributeId::FrostDaysCumulative,
];

fn spec(n: usize, comparison: bool, days: u32) -> ReportSpec {
    ReportSpec {
        point: GeoPoint::new(-34.56, 146.40),
        season: SeasonSpec::new(NaiveDate::from_ymd_opt(2021, 10, 1).unwrap(), days, 10.0).unwrap(),
        attributes: ALL[..n].to_vec(),
        comparison,
        difference: false,
        reference: ReferenceKind::default(),
        generated_at: Utc.with_ymd_and_hms(2022, 3, 1, 9, 30, 0).unwrap(),
        attribution: None,
    }
}

fn build(spec: &ReportSpec) -> (Vec<ChartDrawing>, Vec<NlgSummary>) {
    let layout = PageLayout::default();
    let style = layout.chart_style(spec.difference);
    let n = spec.season.length_days as usize;
    let mut charts = Vec::new();
    let mut summaries = Vec::new();
    for (k, &a) in spec.attributes.iter().enumerate() {
        let values = (0..n)
            .map(|i| if i % 17 == 5 { None } else { Some(10.0 + k as f64 + (i as f64 / 9.0).sin() * 4.0) })
            .collect();
        let current = DerivedSeries::new(a, values);
        let stats = summary_stats(&current).unwrap();
        let reference = DerivedSeries::new(a, (0..n).map(|_| Some(10.0 + k as f64)).collect());
        let cmp = difference_series(&current, &reference, spec.reference).unwrap();
        let input = if spec.comparison { ChartInput::Comparison(&cmp) } else { ChartInput::Series(&current) };
        charts.push(render_chart(input, &style).unwrap());
        summaries.push(generate_summary(
            SummaryInput {
                attribute: a,
                display_name: None,
                stats: &stats,
                comparison: spec.comparison.then_some(&cmp),
                season: &spec.season,
                point: spec.point,
                low_confidence: current.low_confidence,
            },
            &Templates::default(),
        ));
    }
    (charts, summaries)
}

/// Strings shown on a page, decoded from WinAnsi.
fn page_text(doc: &lopdf::Document, id: lopdf::ObjectId) -> Vec<String> {
    let content = lopdf::content::Content::decode(&doc.get_page_content(id).unwrap()).unwrap();
    content
        .operations
        .iter()
        .filter(|op| op.operator == "Tj")
        .filter_map(|op| op.operands.first()?.as_str().ok())
        .map(|b| b.iter().map(|&c| c as char).collect())
        .collect()
}

fn pages(bytes: &[u8]) -> lopdf::Document {
    lopdf::Document::load_mem(bytes).expect("structurally valid PDF")
}

#[test]
fn page_count_matches_law_for_every_size() {
    for n in 1..=18 {
        let s = spec(n, n % 2 == 0, 120);
        let (charts, summaries) = build(&s);
        let bytes = compose_pdf(&s, &charts, &summaries).unwrap();
        assert!(bytes.starts_with(b"%PDF-1.4"));
        let doc = pages(&bytes);
        assert_eq!(doc.get_pages().len(), page_count(n), "n = {n}");
        assert_eq!(page_count(n), n.div_ceil(6));
    }
}

#[test]
fn seven_charts_leave_one_on_second_page() {
    let s = spec(7, false, 60);
    let (charts, summaries) = build(&s);
    let doc = pages(&compose_pdf(&s, &charts, &summaries).unwrap());
    let ids: Vec<_> = doc.get_pages().into_values().collect();
    let count = |id| page_text(&doc, id).iter().filter(|t| *t == "Days from day-zero").count();
    assert_eq!(count(ids[0]), 6);
    assert_eq!(count(ids[1]), 1);
    assert!(page_text(&doc, ids[1]).contains(&"Page 2 of 2".to_string()));
}

#[test]
fn deterministic_bytes() {
    let s = spec(18, true, 366);
    let (c1, n1) = build(&s);
    let (c2, n2) = build(&s);
    assert_eq!(compose_pdf(&s, &c1, &n1).unwrap(), compose_pdf(&s, &c2, &n2).unwrap());
}

#[test]
fn header_carries_location_day_zero_timestamp_attribution() {
    let mut s = spec(1, false, 30);
    s.attribution = Some("Data courtesy of Example Bureau".into());
    let (charts, summaries) = build(&s);
    let doc = pages(&compose_pdf(&s, &charts, &summaries).unwrap());
    let id = *doc.get_pages().values().next().unwrap();
    let content = page_text(&doc, id).join("\n");
    for needle in ["-34.56, 146.40", "1 October 2021", "2022-03-01 09:30:00 UTC", "Data courtesy of Example Bureau", "base 10.0 °C"] {
        assert!(content.contains(needle), "missing {needle}");
    }
}

#[test]
fn geometry_stays_on_page() {
    let layout = PageLayout::default();
    let s = spec(6, true, 366);
    let (charts, _) = build(&s);
    for (cell, chart) in layout.cells(6).iter().zip(&charts) {
        let (x0, y0, x1, y1) = chart.geometry_bounds();
        let oy = cell.y + cell.height - chart.height;
        assert!(cell.x + x0 >= 0.0 && oy + y0 >= 0.0);
        assert!(cell.x + x1 <= layout.width && oy + y1 <= layout.height);
    }
}

#[test]
fn rejects_bad_specs_and_oversized_charts() {
    let s = spec(2, false, 30);
    let (charts, summaries) = build(&s);
    assert!(matches!(compose_pdf(&s, &charts[..1], &summaries), Err(ReportError::InvalidSpec(_))));

    let mut dup = s.clone();
    dup.attributes = vec![AttributeId::Vpd, AttributeId::Vpd];
    assert!(matches!(compose_pdf(&dup, &charts, &summaries), Err(ReportError::InvalidSpec(_))));

    let mut empty = s.clone();
    empty.attributes.clear();
    assert!(matches!(compose_pdf(&empty, &[], &[]), Err(ReportError::InvalidSpec(_))));

    let mut wide = charts.clone();
    wide[0].width = 400.0;
    assert!(matches!(compose_pdf(&s, &wide, &summaries), Err(ReportError::Layout(_))));
}

#[test]
fn spec_round_trips_as_json() {
    let s = spec(3, true, 30);
    let json = serde_json::to_string(&s).unwrap();
    let back: ReportSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
}
